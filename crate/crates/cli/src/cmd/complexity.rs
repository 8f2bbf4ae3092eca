use quasispec::symbolic::{frequency, SuffixAutomaton, Word};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::model::Model;
use crate::output::{csv_table, emit, warn, OutputArgs, Report};

/// Prefix length per unit of `n_max` when `--length` is not given.
const PREFIX_FACTOR: usize = 20;

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
    /// Prefix length; defaults to 20·n_max.
    #[arg(long)]
    pub length: Option<usize>,
    /// Factors whose frequency in the prefix is reported, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub factor: Vec<String>,
}

#[derive(Debug, Serialize)]
struct FactorFrequency {
    factor: String,
    frequency: f64,
}

#[derive(Debug, Serialize)]
struct Complexity {
    model: String,
    prefix_length: usize,
    n_max: usize,
    /// `p(1) … p(n_max)`
    complexity: Vec<usize>,
    /// The counts agree with those of the doubled prefix.
    stable: bool,
    frequencies: Vec<FactorFrequency>,
}

impl Report for Complexity {
    fn text(&self) -> String {
        let mut s = String::new();
        for (n, p) in self.complexity.iter().enumerate() {
            s += &format!("{:>4} {p}\n", n + 1);
        }
        for f in &self.frequencies {
            s += &format!("frequency of {}: {}\n", f.factor, f.frequency);
        }
        s
    }

    fn csv(&self) -> CliResult<String> {
        csv_table(&["n", "p"], self.complexity.iter().enumerate().map(|(n, p)| [(n + 1).to_string(), p.to_string()]))
    }
}

pub fn run(model: &Model, args: &Args, out: &OutputArgs) -> CliResult<()> {
    if args.n_max == 0 {
        return Err(CliError::usage("--n-max must be positive"));
    }
    let len = args.length.unwrap_or(PREFIX_FACTOR * args.n_max);
    if len < args.n_max {
        return Err(CliError::usage(format!("prefix length {len} is below n_max = {}", args.n_max)));
    }
    let long = model.word(1..=2 * len as i64)?;
    let short = long.prefix(len);
    let p = SuffixAutomaton::build(&short).complexity(args.n_max);
    let p2 = SuffixAutomaton::build(&long).complexity(args.n_max);
    let stable = p == p2;
    if let Some(n) = p.iter().zip(&p2).position(|(a, b)| a != b) {
        warn(format!(
            "p(n) changes under prefix doubling from n = {} ({} vs {}); the prefix of length {len} is too short",
            n + 1,
            p[n],
            p2[n]
        ));
    }
    let frequencies = args
        .factor
        .iter()
        .map(|f| FactorFrequency { factor: f.clone(), frequency: frequency(&short, &Word::from(f.as_str())) })
        .collect();
    let report = Complexity { model: model.label(), prefix_length: len, n_max: args.n_max, complexity: p, stable, frequencies };
    emit(&report, out)
}
