//! Grid arguments: comma lists or `start:stop:count` ranges.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty())
}

fn parse_range(s: &str) -> Result<Option<Vec<f64>>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 1 {
        return Ok(None);
    }
    if parts.len() != 3 {
        return Err(format!("range {s:?} must be start:stop:count"));
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| format!("bad range start in {s:?}"))?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| format!("bad range stop in {s:?}"))?;
    let count: usize = parts[2].trim().parse().map_err(|_| format!("bad range count in {s:?}"))?;
    if count == 0 {
        return Err(format!("range {s:?} has zero points"));
    }
    if count == 1 {
        return Ok(Some(vec![start]));
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok(Some((0..count).map(|k| if k + 1 == count { stop } else { start + step * k as f64 }).collect()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealGrid(pub Vec<f64>);

impl FromStr for RealGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(v) = parse_range(s)? {
            return Ok(Self(v));
        }
        let v = split_list(s)
            .map(|p| p.parse::<f64>().map_err(|_| format!("not a number: {p:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        if v.is_empty() {
            return Err("empty grid".into());
        }
        Ok(Self(v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntGrid(pub Vec<u64>);

impl FromStr for IntGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(v) = parse_range(s)? {
            let mut out: Vec<u64> = Vec::with_capacity(v.len());
            for x in v {
                if !(x >= 0.0) {
                    return Err(format!("negative entry in integer range {s:?}"));
                }
                out.push(x.round() as u64);
            }
            out.dedup();
            return Ok(Self(out));
        }
        let v = split_list(s)
            .map(|p| p.parse::<u64>().map_err(|_| format!("not a non-negative integer: {p:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        if v.is_empty() {
            return Err("empty grid".into());
        }
        Ok(Self(v))
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`).
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("not a complex number: {s:?}");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent or leading
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = Some(k);
            break;
        }
    }
    let imag = |p: &str| -> Result<f64, String> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.parse().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re: f64 = body[..k].parse().map_err(|_| bad())?;
            Ok(Complex64::new(re, imag(&body[k..])?))
        }
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGrid(pub Vec<Complex64>);

impl FromStr for ComplexGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(v) = parse_range(s)? {
            return Ok(Self(v.into_iter().map(|x| Complex64::new(x, 0.0)).collect()));
        }
        let v = split_list(s).map(parse_complex).collect::<Result<Vec<_>, _>>()?;
        if v.is_empty() {
            return Err("empty grid".into());
        }
        Ok(Self(v))
    }
}

impl fmt::Display for ComplexGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect();
        f.write_str(&parts.join(","))
    }
}

impl Serialize for ComplexGrid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
