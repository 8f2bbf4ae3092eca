use quasispec::operator::{jl_ratio, lyapunov_estimate};
use rayon::prelude::*;
use serde::Serialize;

use crate::cmd::{fmt_g, linspace};
use crate::error::{CliError, CliResult};
use crate::model::Model;
use crate::output::{csv_table, emit, OutputArgs, Report};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Energies, comma separated; otherwise a grid from --e-min to --e-max.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub energy: Vec<f64>,
    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    pub e_min: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub e_max: f64,
    #[arg(long, default_value_t = 61)]
    pub points: usize,
    /// Number of sites in the transfer-matrix product.
    #[arg(long, default_value_t = 10_000)]
    pub length: usize,
    /// Also evaluate ‖φ₁‖_L^{2−α} / ‖φ₂‖_L^{α} at L = 2, 4, 8, … for this α.
    #[arg(long)]
    pub jl_alpha: Option<f64>,
}

#[derive(Debug, Serialize)]
struct Point {
    energy: f64,
    lyapunov: f64,
    /// `(L, ratio)`
    jl_ratio: Option<Vec<(f64, f64)>>,
}

#[derive(Debug, Serialize)]
struct Lyapunov {
    model: String,
    length: usize,
    jl_alpha: Option<f64>,
    points: Vec<Point>,
}

impl Report for Lyapunov {
    fn text(&self) -> String {
        let mut s = String::new();
        for p in &self.points {
            s += &format!("E = {:>10.6}: gamma = {}", p.energy, fmt_g(p.lyapunov));
            if let Some(&(l, r)) = p.jl_ratio.as_ref().and_then(|v| v.last()) {
                s += &format!(", ratio at L = {l}: {}", fmt_g(r));
            }
            s.push('\n');
        }
        s
    }

    fn csv(&self) -> CliResult<String> {
        csv_table(&["E", "lyapunov"], self.points.iter().map(|p| [p.energy.to_string(), p.lyapunov.to_string()]))
    }
}

pub fn run(model: &Model, args: &Args, out: &OutputArgs) -> CliResult<()> {
    if args.length == 0 {
        return Err(CliError::usage("--length must be positive"));
    }
    let energies = if args.energy.is_empty() { linspace(args.e_min, args.e_max, args.points) } else { args.energy.clone() };
    if let Some(&e) = energies.iter().find(|e| !e.is_finite()) {
        return Err(CliError::usage(format!("energy {e} is not finite")));
    }
    let v = model.potential(1..=args.length as i64 + 1)?;
    let grid: Vec<f64> = std::iter::successors(Some(2usize), |l| Some(l * 2))
        .take_while(|&l| l <= args.length)
        .map(|l| l as f64)
        .collect();
    let points = energies
        .par_iter()
        .map(|&e| -> CliResult<Point> {
            let jl = match args.jl_alpha {
                Some(a) => Some(grid.iter().copied().zip(jl_ratio(e, &v, a, &grid)?).collect()),
                None => None,
            };
            Ok(Point { energy: e, lyapunov: lyapunov_estimate(e, &v, args.length)?, jl_ratio: jl })
        })
        .collect::<CliResult<Vec<_>>>()?;
    emit(&Lyapunov { model: model.label(), length: args.length, jl_alpha: args.jl_alpha, points }, out)
}
