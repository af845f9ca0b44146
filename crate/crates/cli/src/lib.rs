//! Command-line front end: every command evaluates into a [`ResultTable`]
//! that is written as CSV or JSON.

pub mod args;
pub mod commands;
pub mod grid;
pub mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use thiserror::Error;

pub use args::Cli;
pub use commands::run;
pub use table::ResultTable;

use args::Format;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "BARNESG_OUTPUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Numeric(#[from] barnesg::Error),
    #[error("table format: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Where the table goes for these arguments.
pub fn destination(cli: &Cli) -> Option<PathBuf> {
    if let Some(p) = &cli.output.out {
        return Some(p.clone());
    }
    let dir = std::env::var_os(OUTPUT_DIR_ENV)?;
    Some(PathBuf::from(dir))
        .map(|d| d.join(format!("{}.{}", command_slug(cli), cli.output.format.extension())))
}

fn command_slug(cli: &Cli) -> String {
    use args::*;
    let s = match &cli.command {
        Command::Barnes(BarnesCmd::Eval(_)) => "barnes-eval",
        Command::Barnes(BarnesCmd::Table(_)) => "barnes-table",
        Command::Cue(CueCmd::Moments(_)) => "cue-moments",
        Command::Cue(CueCmd::Limit(_)) => "cue-limit",
        Command::Verify(VerifyCmd::KsIdentity(_)) => "verify-ks-identity",
        Command::Verify(VerifyCmd::BetaIdentity(_)) => "verify-beta-identity",
        Command::Verify(VerifyCmd::Haar(_)) => "verify-haar",
        Command::Verify(VerifyCmd::Q(_)) => "verify-q",
        Command::Ggc(GgcCmd::H(_)) => "ggc-h",
        Command::Ggc(GgcCmd::Limit(_)) => "ggc-limit",
        Command::Ggc(GgcCmd::RnProbe(_)) => "ggc-rn-probe",
        Command::Ggc(GgcCmd::DoubleSum(_)) => "ggc-double-sum",
        Command::Factor(FactorCmd::Arithmetic(_)) => "factor-arithmetic",
    };
    s.to_owned()
}

pub fn write_table(table: &ResultTable, format: Format, out: impl Write) -> Result<(), CliError> {
    match format {
        Format::Csv => table.write_csv(out),
        Format::Json => table.write_json(out),
    }
}

/// Run the command and write its table. Returns whether every row passed.
pub fn execute(cli: &Cli) -> Result<bool, CliError> {
    let table = run(cli)?;
    match destination(cli) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            let mut w = BufWriter::new(File::create(&path)?);
            write_table(&table, cli.output.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write_table(&table, cli.output.format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(table.all_pass())
}
