use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Defaults to the `--out` extension, or text on standard output.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
}

impl OutputArgs {
    pub fn format(&self) -> Format {
        if let Some(f) = self.format {
            return f;
        }
        match self.out.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some("csv") => Format::Csv,
            Some("txt") => Format::Text,
            Some(_) => Format::Json,
            None if self.out.is_some() => Format::Json,
            None => Format::Text,
        }
    }
}

/// A command result in its three renderings.
pub trait Report: Serialize {
    fn text(&self) -> String;
    fn csv(&self) -> CliResult<String>;
}

pub fn emit<R: Report>(report: &R, out: &OutputArgs) -> CliResult<()> {
    let mut body = match out.format() {
        Format::Text => report.text(),
        Format::Json => serde_json::to_string_pretty(report).map_err(|e| CliError::Numerical(e.to_string()))?,
        Format::Csv => report.csv()?,
    };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &out.out {
        Some(path) => std::fs::write(path, body)?,
        None => match std::io::stdout().lock().write_all(body.as_bytes()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            r => r?,
        },
    }
    Ok(())
}

/// CSV text with a fixed header.
pub fn csv_table<I, R>(header: &[&str], rows: I) -> CliResult<String>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Numerical(e.to_string());
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(r).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Numerical(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn warn(msg: impl AsRef<str>) {
    eprintln!("warning: {}", msg.as_ref());
}
