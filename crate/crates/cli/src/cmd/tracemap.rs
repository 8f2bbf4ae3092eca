use quasispec::tracemap::{c_lambda, classify_energy, sturmian_traces, Classification, SubstitutionModel, TraceOrbit};
use rayon::prelude::*;
use serde::Serialize;

use crate::cmd::fmt_g;
use crate::error::{CliError, CliResult};
use crate::model::{Kind, Model};
use crate::output::{csv_table, emit, OutputArgs, Report};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Energies, comma separated.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub energy: Vec<f64>,
    #[arg(long, default_value_t = 12)]
    pub level: usize,
    /// Escape bound for substitution orbits; Sturmian orbits use C_λ = 2 + √(8 + λ²).
    #[arg(long)]
    pub bound: Option<f64>,
}

#[derive(Debug, Serialize)]
struct Orbit {
    energy: f64,
    first_index: i64,
    traces: Vec<f64>,
    saturated: bool,
    /// `CERTIFIED_OUT`, `UNDECIDED_IN`, or `UNJUDGED` when no bound applies.
    status: &'static str,
    escape_level: Option<i64>,
}

#[derive(Debug, Serialize)]
struct Tracemap {
    model: String,
    level: usize,
    bound: Option<f64>,
    /// `full` for Sturmian orbits; `subsequence` for substitution orbits, whose
    /// escape is certified only along the levels of the substitution.
    soundness: &'static str,
    orbits: Vec<Orbit>,
}

impl Report for Tracemap {
    fn text(&self) -> String {
        let mut s = String::new();
        for o in &self.orbits {
            let sup = o.traces.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let verdict = match (o.status, o.escape_level) {
                ("CERTIFIED_OUT", Some(m)) => format!("certified out from level {m}"),
                ("UNDECIDED_IN", _) => format!("no escape up to level {}", self.level),
                _ => "not judged".to_string(),
            };
            s += &format!("E = {}: {verdict}; max |x_n| = {}\n", o.energy, fmt_g(sup));
        }
        s
    }

    fn csv(&self) -> CliResult<String> {
        let rows = self.orbits.iter().flat_map(|o| {
            o.traces
                .iter()
                .enumerate()
                .map(move |(i, x)| [o.energy.to_string(), (o.first_index + i as i64).to_string(), x.to_string()])
        });
        csv_table(&["E", "n", "trace"], rows)
    }
}

fn status(orbit: &TraceOrbit<f64>, judged: bool) -> &'static str {
    match (judged, orbit.escape_index) {
        (false, _) => "UNJUDGED",
        (true, Some(_)) => "CERTIFIED_OUT",
        (true, None) => "UNDECIDED_IN",
    }
}

pub fn run(model: &Model, args: &Args, out: &OutputArgs) -> CliResult<()> {
    if let Some(&e) = args.energy.iter().find(|e| !e.is_finite()) {
        return Err(CliError::usage(format!("energy {e} is not finite")));
    }
    let report = match model.sturmian()? {
        Some((cf, lambda)) => {
            if args.bound.is_some() {
                return Err(CliError::usage("--bound applies to substitution models; Sturmian orbits use C_λ"));
            }
            let orbits = args
                .energy
                .par_iter()
                .map(|&e| -> CliResult<Orbit> {
                    let o = sturmian_traces(e, lambda, &cf, args.level)?;
                    let escape = match classify_energy(e, lambda, &cf, args.level)? {
                        Classification::CertifiedOut { level } => Some(level),
                        Classification::UndecidedIn { .. } => None,
                    };
                    Ok(Orbit {
                        energy: e,
                        first_index: o.first_index,
                        saturated: o.saturated,
                        status: status(&o, true),
                        escape_level: escape,
                        traces: o.values,
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            Tracemap { model: model.label(), level: args.level, bound: Some(c_lambda(lambda)), soundness: "full", orbits }
        }
        None => {
            let Kind::Substitution { rule, .. } = &model.kind else {
                return Err(CliError::usage("trace orbits need a Sturmian or substitution model"));
            };
            let sm = SubstitutionModel::new(rule, model.coding.clone(), model.lambda, args.level)?;
            let bound = args.bound.unwrap_or(f64::INFINITY);
            let orbits = args
                .energy
                .par_iter()
                .map(|&e| {
                    let o = sm.orbit(e, args.level, bound);
                    Orbit {
                        energy: e,
                        first_index: o.first_index,
                        saturated: o.saturated,
                        status: status(&o, args.bound.is_some()),
                        escape_level: o.escape_index.filter(|_| args.bound.is_some()),
                        traces: o.values,
                    }
                })
                .collect();
            Tracemap { model: model.label(), level: args.level, bound: args.bound, soundness: "subsequence", orbits }
        }
    };
    emit(&report, out)
}

