//! Column-oriented result tables with lossless CSV and JSON encodings.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub command: String,
    pub build: String,
    pub seed: u64,
    pub params: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Real,
    Int,
    Bool,
    Text,
}

impl Kind {
    fn as_str(self) -> &'static str {
        match self {
            Kind::Real => "real",
            Kind::Int => "int",
            Kind::Bool => "bool",
            Kind::Text => "text",
        }
    }

    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "real" => Ok(Kind::Real),
            "int" => Ok(Kind::Int),
            "bool" => Ok(Kind::Bool),
            "text" => Ok(Kind::Text),
            _ => Err(CliError::Format(format!("unknown column type {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

fn ser_reals<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
    // JSON has no NaN/Inf; those become null
    s.collect_seq(v.iter().map(|x| if x.is_finite() { Some(*x) } else { None }))
}

fn de_reals<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
    let v: Vec<Option<f64>> = Vec::deserialize(d)?;
    Ok(v.into_iter().map(|x| x.unwrap_or(f64::NAN)).collect())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", content = "values", rename_all = "lowercase")]
pub enum Values {
    Real(
        #[serde(serialize_with = "ser_reals", deserialize_with = "de_reals")]
        Vec<f64>,
    ),
    Int(Vec<i64>),
    Bool(Vec<bool>),
    Text(Vec<String>),
}

impl PartialEq for Values {
    /// Reals compare bitwise so NaN entries round-trip as equal.
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Values::Real(a), Values::Real(b)) => {
                a.len() == b.len()
                    && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan()))
            }
            (Values::Int(a), Values::Int(b)) => a == b,
            (Values::Bool(a), Values::Bool(b)) => a == b,
            (Values::Text(a), Values::Text(b)) => a == b,
            _ => false,
        }
    }
}

impl Values {
    fn empty(kind: Kind) -> Self {
        match kind {
            Kind::Real => Values::Real(Vec::new()),
            Kind::Int => Values::Int(Vec::new()),
            Kind::Bool => Values::Bool(Vec::new()),
            Kind::Text => Values::Text(Vec::new()),
        }
    }

    fn kind(&self) -> Kind {
        match self {
            Values::Real(_) => Kind::Real,
            Values::Int(_) => Kind::Int,
            Values::Bool(_) => Kind::Bool,
            Values::Text(_) => Kind::Text,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Values::Real(v) => v.len(),
            Values::Int(v) => v.len(),
            Values::Bool(v) => v.len(),
            Values::Text(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn push(&mut self, cell: Cell) -> Result<(), CliError> {
        match (self, cell) {
            (Values::Real(v), Cell::Real(x)) => v.push(x),
            (Values::Int(v), Cell::Int(x)) => v.push(x),
            (Values::Bool(v), Cell::Bool(x)) => v.push(x),
            (Values::Text(v), Cell::Text(x)) => v.push(x),
            (col, cell) => {
                return Err(CliError::Format(format!(
                    "cell {cell:?} does not fit a {} column",
                    col.kind().as_str()
                )))
            }
        }
        Ok(())
    }

    fn push_placeholder(&mut self) {
        match self {
            Values::Real(v) => v.push(f64::NAN),
            Values::Int(v) => v.push(0),
            Values::Bool(v) => v.push(false),
            Values::Text(v) => v.push(String::new()),
        }
    }

    fn render(&self, row: usize) -> String {
        match self {
            Values::Real(v) => format_real(v[row]),
            Values::Int(v) => v[row].to_string(),
            Values::Bool(v) => v[row].to_string(),
            Values::Text(v) => v[row].clone(),
        }
    }

    fn parse_push(&mut self, s: &str) -> Result<(), CliError> {
        let bad = |what: &str| CliError::Format(format!("cannot parse {s:?} as {what}"));
        match self {
            Values::Real(v) => v.push(s.parse().map_err(|_| bad("real"))?),
            Values::Int(v) => v.push(s.parse().map_err(|_| bad("int"))?),
            Values::Bool(v) => v.push(s.parse().map_err(|_| bad("bool"))?),
            Values::Text(v) => v.push(s.to_owned()),
        }
        Ok(())
    }
}

/// 17 significant digits, `.` decimal separator.
pub fn format_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    #[serde(flatten)]
    pub values: Values,
}

/// Every table ends with a `pass` and an `error` column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub metadata: Metadata,
    pub columns: Vec<Column>,
}

pub const PASS: &str = "pass";
pub const ERROR: &str = "error";

impl ResultTable {
    pub fn new(metadata: Metadata, columns: &[(&str, Kind)]) -> Self {
        let mut cols: Vec<Column> = columns
            .iter()
            .map(|(name, kind)| Column {
                name: (*name).to_owned(),
                values: Values::empty(*kind),
            })
            .collect();
        cols.push(Column {
            name: PASS.into(),
            values: Values::empty(Kind::Bool),
        });
        cols.push(Column {
            name: ERROR.into(),
            values: Values::empty(Kind::Text),
        });
        Self {
            metadata,
            columns: cols,
        }
    }

    fn data_columns(&self) -> usize {
        self.columns.len() - 2
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    pub fn push_row(&mut self, cells: Vec<Cell>, pass: bool) -> Result<(), CliError> {
        if cells.len() != self.data_columns() {
            return Err(CliError::Format(format!(
                "row has {} cells, table has {} data columns",
                cells.len(),
                self.data_columns()
            )));
        }
        for (col, cell) in self.columns.iter_mut().zip(cells) {
            col.values.push(cell)?;
        }
        let n = self.columns.len();
        self.columns[n - 2].values.push(Cell::Bool(pass))?;
        self.columns[n - 1].values.push(Cell::Text(String::new()))
    }

    /// A failed row: the leading `key` cells are kept, the rest are
    /// placeholders, `pass` is false and the message goes to `error`.
    pub fn push_error(&mut self, key: Vec<Cell>, message: String) -> Result<(), CliError> {
        let k = key.len();
        for (col, cell) in self.columns.iter_mut().zip(key) {
            col.values.push(cell)?;
        }
        let data = self.data_columns();
        for col in &mut self.columns[k..data] {
            col.values.push_placeholder();
        }
        let n = self.columns.len();
        self.columns[n - 2].values.push(Cell::Bool(false))?;
        self.columns[n - 1].values.push(Cell::Text(message))
    }

    /// Push `key ++ rest` on success, an error row otherwise.
    pub fn push_result(
        &mut self,
        key: Vec<Cell>,
        rest: barnesg::Result<(Vec<Cell>, bool)>,
    ) -> Result<(), CliError> {
        match rest {
            Ok((cells, pass)) => {
                let mut row = key;
                row.extend(cells);
                self.push_row(row, pass)
            }
            Err(e) => self.push_error(key, e.to_string()),
        }
    }

    pub fn column(&self, name: &str) -> Option<&Values> {
        self.columns.iter().find(|c| c.name == name).map(|c| &c.values)
    }

    pub fn all_pass(&self) -> bool {
        match self.column(PASS) {
            Some(Values::Bool(v)) => v.iter().all(|p| *p),
            _ => false,
        }
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), CliError> {
        writeln!(out, "# command: {}", self.metadata.command)?;
        writeln!(out, "# build: {}", self.metadata.build)?;
        writeln!(out, "# seed: {}", self.metadata.seed)?;
        for (k, v) in &self.metadata.params {
            writeln!(out, "# param.{k}: {v}")?;
        }
        let types: Vec<&str> = self.columns.iter().map(|c| c.values.kind().as_str()).collect();
        writeln!(out, "# types: {}", types.join(","))?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
        for r in 0..self.rows() {
            w.write_record(self.columns.iter().map(|c| c.values.render(r)))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self, CliError> {
        let mut command = None;
        let mut build = None;
        let mut seed = None;
        let mut params = BTreeMap::new();
        let mut types = None;
        let mut body = String::new();
        for line in input.lines() {
            let line = line?;
            if let Some(meta) = line.strip_prefix("# ") {
                let (k, v) = meta
                    .split_once(": ")
                    .ok_or_else(|| CliError::Format(format!("bad metadata line {line:?}")))?;
                match k {
                    "command" => command = Some(v.to_owned()),
                    "build" => build = Some(v.to_owned()),
                    "seed" => {
                        seed = Some(v.parse().map_err(|_| CliError::Format(format!("bad seed {v:?}")))?)
                    }
                    "types" => types = Some(v.split(',').map(Kind::parse).collect::<Result<Vec<_>, _>>()?),
                    _ => {
                        let key = k
                            .strip_prefix("param.")
                            .ok_or_else(|| CliError::Format(format!("unknown metadata key {k:?}")))?;
                        params.insert(key.to_owned(), v.to_owned());
                    }
                }
            } else {
                body.push_str(&line);
                body.push('\n');
            }
        }
        let missing = |what: &str| CliError::Format(format!("missing {what} metadata"));
        let types = types.ok_or_else(|| missing("types"))?;
        let mut reader = csv::Reader::from_reader(body.as_bytes());
        let names: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
        if names.len() != types.len() {
            return Err(CliError::Format("header and types disagree".into()));
        }
        let mut columns: Vec<Column> = names
            .into_iter()
            .zip(&types)
            .map(|(name, kind)| Column {
                name,
                values: Values::empty(*kind),
            })
            .collect();
        for record in reader.records() {
            let record = record?;
            for (col, field) in columns.iter_mut().zip(record.iter()) {
                col.values.parse_push(field)?;
            }
        }
        Ok(Self {
            metadata: Metadata {
                command: command.ok_or_else(|| missing("command"))?,
                build: build.ok_or_else(|| missing("build"))?,
                seed: seed.ok_or_else(|| missing("seed"))?,
                params,
            },
            columns,
        })
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<(), CliError> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)?;
        Ok(())
    }

    pub fn read_json<R: std::io::Read>(input: R) -> Result<Self, CliError> {
        Ok(serde_json::from_reader(input)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultTable {
        let meta = Metadata {
            command: "demo run".into(),
            build: "test".into(),
            seed: 7,
            params: BTreeMap::from([("n".into(), "[1,2]".into())]),
        };
        let mut t = ResultTable::new(meta, &[("n", Kind::Int), ("x", Kind::Real), ("note", Kind::Text)]);
        t.push_row(vec![1u64.into(), 0.1.into(), "a, \"quoted\"".into()], true).unwrap();
        t.push_row(vec![2u64.into(), (1.0 / 3.0).into(), "".into()], true).unwrap();
        t.push_error(vec![3u64.into()], "pole of f at -1".into()).unwrap();
        t
    }

    #[test]
    fn csv_round_trip() {
        let t = sample();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let back = ResultTable::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, t);
        assert!(!t.all_pass());
    }

    #[test]
    fn json_round_trip() {
        let t = sample();
        let mut buf = Vec::new();
        t.write_json(&mut buf).unwrap();
        assert_eq!(ResultTable::read_json(buf.as_slice()).unwrap(), t);
    }

    #[test]
    fn real_format_is_lossless() {
        for x in [0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0] {
            assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_real(0.1), "1.0000000000000001e-1");
    }

    #[test]
    fn row_shape_checked() {
        let mut t = sample();
        assert!(t.push_row(vec![1u64.into()], true).is_err());
        assert!(t.push_row(vec![0.5.into(), 0.5.into(), "".into()], true).is_err());
    }
}
