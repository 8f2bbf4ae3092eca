use quasispec::spectrum::{model_bands, BandList};
use serde::Serialize;

use crate::cmd::fmt_g;
use crate::error::{CliError, CliResult};
use crate::model::Model;
use crate::output::{csv_table, emit, OutputArgs, Report};

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long, default_value_t = 8)]
    pub level: usize,
    /// Bisection tolerance for band edges.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Also report the measures of all levels from this one up to --level.
    #[arg(long)]
    pub from: Option<usize>,
}

#[derive(Debug, Serialize)]
struct LevelMeasure {
    level: usize,
    period: usize,
    measure: f64,
}

#[derive(Debug, Serialize)]
struct Spectrum {
    model: String,
    period: usize,
    #[serde(flatten)]
    bands: BandList<f64>,
    decay: Vec<LevelMeasure>,
}

impl Report for Spectrum {
    fn text(&self) -> String {
        let b = &self.bands;
        let mut s = format!(
            "level {}: {} bands, measure {}\n",
            b.level,
            b.count(),
            fmt_g(b.measure)
        );
        for m in &self.decay {
            s += &format!("  level {:>3} (period {:>7}): measure {}\n", m.level, m.period, fmt_g(m.measure));
        }
        for band in &b.bands {
            s += &format!("[{:.12}, {:.12}]\n", band[0], band[1]);
        }
        s
    }

    fn csv(&self) -> CliResult<String> {
        let b = &self.bands;
        let rows = b.bands.iter().enumerate().map(|(i, band)| {
            let touching = b.touching.get(i).copied().unwrap_or(false);
            [i.to_string(), band[0].to_string(), band[1].to_string(), touching.to_string()]
        });
        csv_table(&["band", "lo", "hi", "touches_next"], rows)
    }
}

pub fn run(model: &Model, args: &Args, out: &OutputArgs) -> CliResult<()> {
    if !(args.tol > 0.0) {
        return Err(CliError::usage("--tol must be positive"));
    }
    let from = args.from.unwrap_or(args.level);
    if from > args.level {
        return Err(CliError::usage(format!("--from {from} is above --level {}", args.level)));
    }
    let tm = model.trace_model(args.level)?;
    let mut decay = Vec::new();
    for level in from..args.level {
        let b = model_bands(tm.as_ref(), level, args.tol)?;
        decay.push(LevelMeasure { level, period: tm.period(level), measure: b.measure });
    }
    let bands = model_bands(tm.as_ref(), args.level, args.tol)?;
    if args.from.is_some() {
        decay.push(LevelMeasure { level: args.level, period: tm.period(args.level), measure: bands.measure });
    }
    let report = Spectrum { model: model.label(), period: tm.period(args.level), bands, decay };
    emit(&report, out)
}
