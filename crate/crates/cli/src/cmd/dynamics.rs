use quasispec::dynamics::{build_box, fit_exponent, moment_curve, ExponentFit, FitPolicy, MomentCurve};
use serde::Serialize;

use crate::cmd::fmt_g;
use crate::error::{CliError, CliResult};
use crate::model::Model;
use crate::output::{csv_table, emit, warn, OutputArgs, Report};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Half-width N of the box −N..N.
    #[arg(short = 'N', long = "size", default_value_t = 1500)]
    pub size: usize,
    /// Moment orders, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub p: Vec<f64>,
    /// Averaging times, comma separated; otherwise a logarithmic grid.
    #[arg(long, value_delimiter = ',')]
    pub times: Vec<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 320.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 12)]
    pub samples: usize,
    /// Finitely supported initial state as site=amplitude pairs, e.g. 0=1,1=1;
    /// normalized before use. Defaults to δ_0.
    #[arg(long, allow_hyphen_values = true)]
    pub state: Option<String>,
    #[arg(long, default_value_t = 8)]
    pub min_samples: usize,
    /// Minimum span of the fitted times, in decades.
    #[arg(long, default_value_t = 1.5)]
    pub min_decades: f64,
}

#[derive(Debug, Serialize)]
struct Curve {
    #[serde(flatten)]
    curve: MomentCurve<f64>,
    contaminated_from: Option<f64>,
    fit: Option<ExponentFit<f64>>,
    fit_error: Option<String>,
}

#[derive(Debug, Serialize)]
struct Dynamics {
    model: String,
    lambda: f64,
    size: usize,
    initial_state: String,
    fit_policy: FitPolicy,
    curves: Vec<Curve>,
}

impl Report for Dynamics {
    fn text(&self) -> String {
        let mut s = String::new();
        for c in &self.curves {
            s += &format!("p = {}: ", c.curve.p);
            match (&c.fit, &c.fit_error) {
                (Some(f), _) => {
                    s += &format!(
                        "exponent {:.4} (residual {}, {} samples)",
                        f.exponent,
                        fmt_g(f.residual_rms),
                        f.samples
                    )
                }
                (None, Some(e)) => s += &format!("no exponent: {e}"),
                _ => {}
            }
            s += &format!(", unitarity drift {}\n", fmt_g(c.curve.unitarity_drift));
            for &(t, m) in &c.curve.samples {
                s += &format!("  T = {:>10.3}  {}\n", t, fmt_g(m));
            }
        }
        s
    }

    fn csv(&self) -> CliResult<String> {
        let rows = self
            .curves
            .iter()
            .flat_map(|c| c.curve.samples.iter().map(move |&(t, m)| [c.curve.p.to_string(), t.to_string(), m.to_string()]));
        csv_table(&["p", "T", "value"], rows)
    }
}

fn initial_state(spec: Option<&str>, n: usize) -> CliResult<(Vec<f64>, String)> {
    let dim = 2 * n + 1;
    let mut psi = vec![0.0; dim];
    let Some(spec) = spec else {
        psi[n] = 1.0;
        return Ok((psi, "delta0".into()));
    };
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || CliError::usage(format!("state entry {item:?} is not of the form site=amplitude"));
        let (site, amp) = item.split_once('=').ok_or_else(bad)?;
        let site: i64 = site.trim().parse().map_err(|_| bad())?;
        let amp: f64 = amp.trim().parse().map_err(|_| bad())?;
        if site.unsigned_abs() as usize > n || !amp.is_finite() {
            return Err(CliError::usage(format!("state entry {item:?} lies outside the box or is not finite")));
        }
        psi[(site + n as i64) as usize] += amp;
    }
    let norm = psi.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(CliError::usage("initial state is zero"));
    }
    psi.iter_mut().for_each(|x| *x /= norm);
    Ok((psi, spec.to_string()))
}

fn time_grid(a: &Args) -> CliResult<Vec<f64>> {
    if !a.times.is_empty() {
        return Ok(a.times.clone());
    }
    if !(a.t_min > 0.0 && a.t_max > a.t_min) || a.samples < 2 {
        return Err(CliError::usage("time grid needs 0 < --t-min < --t-max and at least 2 samples"));
    }
    let r = (a.t_max / a.t_min).ln();
    Ok((0..a.samples).map(|k| a.t_min * (r * k as f64 / (a.samples - 1) as f64).exp()).collect())
}

pub fn run(model: &Model, args: &Args, out: &OutputArgs) -> CliResult<()> {
    if args.size == 0 {
        return Err(CliError::usage("--size must be positive"));
    }
    if let Some(&p) = args.p.iter().find(|p| !(**p >= 0.0)) {
        return Err(CliError::usage(format!("moment order {p} must be nonnegative")));
    }
    let times = time_grid(args)?;
    if let Some(&t) = times.iter().find(|t| !(**t > 0.0)) {
        return Err(CliError::usage(format!("averaging time {t} must be positive")));
    }
    let n = args.size as i64;
    let (psi, tag) = initial_state(args.state.as_deref(), args.size)?;
    let h = build_box(&model.potential(-n..=n)?, args.size)?;
    let prop = h.eigen()?;
    let policy = FitPolicy { min_samples: args.min_samples, min_decades: args.min_decades };
    let mut curves = Vec::new();
    for &p in &args.p {
        let curve = moment_curve(&prop, &psi, p, &times, &tag)?;
        let contaminated = curve.contaminated_from();
        let mut trusted = curve.clone();
        if let Some(t) = contaminated {
            let k = curve.trusted().len();
            warn(format!(
                "p = {p}: samples from T = {t} on reach the box boundary; fitting the first {k} of {}",
                curve.samples.len()
            ));
            trusted.samples.truncate(k);
            trusted.outer_mass.truncate(k);
        }
        let (fit, fit_error) = match fit_exponent(&trusted, policy) {
            Ok(f) => (Some(f), None),
            Err(e) => {
                warn(format!("p = {p}: no exponent fitted: {e}"));
                (None, Some(e.to_string()))
            }
        };
        curves.push(Curve { curve, contaminated_from: contaminated, fit, fit_error });
    }
    let report = Dynamics {
        model: model.label(),
        lambda: model.lambda,
        size: args.size,
        initial_state: tag,
        fit_policy: policy,
        curves,
    };
    emit(&report, out)
}
