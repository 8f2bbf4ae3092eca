use quasispec::gordon::{
    frequency_lower_bound, scan_gordon_scales, three_block_bound, two_block_bound, FrequencyBound, GordonCertificate,
    GordonKind,
};
use quasispec::operator::Potential;
use quasispec::spectrum::{model_bands, IntervalSet};
use quasispec::symbolic::{find_powers, SubstitutionRule, Word};
use quasispec::tracemap::c_lambda;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cmd::fmt_g;
use crate::error::{CliError, CliResult};
use crate::model::{Kind, Model};
use crate::output::{csv_table, emit, OutputArgs, Report};

/// Largest period of the approximant whose bands supply the sampled energies.
const ENERGY_PERIOD: usize = 1000;
/// Scanned length for substitutions when neither --n-max nor --length is given.
const DEFAULT_SCAN: usize = 1 << 16;
/// Shortest scanned Sturmian word, so that low levels have interior blocks.
const MIN_SCAN: usize = 256;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Highest scale; chosen from the scanned length when absent.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Sampled spectrum energies per scale.
    #[arg(long, default_value_t = 50)]
    pub energies: usize,
    /// Trace bound C of the two-block criterion. Sturmian models and the
    /// Fibonacci substitution default to C_λ = 2 + √(8 + λ²).
    #[arg(long)]
    pub trace_bound: Option<f64>,
    /// Length of the scanned word.
    #[arg(long)]
    pub length: Option<usize>,
}

#[derive(Debug, Serialize)]
struct Failure {
    energy: f64,
    reason: String,
}

#[derive(Debug, Serialize)]
struct ScaleCheck {
    #[serde(flatten)]
    certificate: GordonCertificate<f64>,
    length: usize,
    /// `square`, `cube`, `fourth power`, or `partition` for Sturmian scans.
    source: &'static str,
    required: f64,
    sampled: usize,
    failures: Vec<Failure>,
    frequency_bound: Option<FrequencyBound>,
}

impl ScaleCheck {
    fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Serialize)]
struct Gordon {
    model: String,
    scanned_length: usize,
    n_max: usize,
    trace_bound: Option<f64>,
    energy_level: usize,
    energies: Vec<f64>,
    /// Whether the partial quotients satisfy `a_n ≥ 4` infinitely often.
    digits_limsup_ge_4: Option<bool>,
    checks: Vec<ScaleCheck>,
    notes: Vec<String>,
}

fn kind_name(k: GordonKind) -> &'static str {
    match k {
        GordonKind::TwoBlock => "two-block",
        GordonKind::ThreeBlock => "three-block",
    }
}

impl Report for Gordon {
    fn text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let from = match c.source {
                "fourth power" => " (from a fourth power)",
                "cube" => " (from a cube)",
                _ => "",
            };
            let verdict = if c.holds() {
                format!("holds for all {} sampled spectrum energies", c.sampled)
            } else {
                format!("fails at {} of {} sampled spectrum energies", c.failures.len(), c.sampled)
            };
            s += &format!(
                "level {} (length {}): {} criterion{from} {verdict}\n",
                c.certificate.scale,
                c.length,
                kind_name(c.certificate.kind)
            );
        }
        if let Some(k) = self.digits_limsup_ge_4 {
            s += &format!("partial quotients a_n >= 4 infinitely often: {k}\n");
        }
        for n in &self.notes {
            s += n;
            s.push('\n');
        }
        s
    }

    fn csv(&self) -> CliResult<String> {
        let rows = self.checks.iter().flat_map(|c| {
            let cert = &c.certificate;
            let ok = cert.verified_energies.iter().map(move |&(e, a)| (e, Some(a), true));
            let bad = c.failures.iter().map(|f| (f.energy, None, false));
            ok.chain(bad).map(move |(e, a, holds)| {
                [
                    cert.scale.to_string(),
                    c.length.to_string(),
                    kind_name(cert.kind).to_string(),
                    cert.offset.to_string(),
                    e.to_string(),
                    a.map(|a| a.to_string()).unwrap_or_default(),
                    c.required.to_string(),
                    holds.to_string(),
                ]
            })
        });
        csv_table(&["level", "length", "kind", "offset", "E", "attained", "required", "holds"], rows)
    }
}

/// `k` energies drawn uniformly, by measure, from `set`.
fn sample_by_measure(set: &IntervalSet<f64>, k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let total = set.measure();
    let mut out: Vec<f64> = (0..k)
        .map(|_| {
            let mut u = rng.gen::<f64>() * total;
            for iv in set.intervals() {
                let w = iv[1] - iv[0];
                if u <= w {
                    return iv[0] + u;
                }
                u -= w;
            }
            set.intervals().last().map_or(0.0, |iv| iv[1])
        })
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// A repetition of length `length` with its alignment offset.
struct Candidate {
    level: usize,
    length: usize,
    kind: GordonKind,
    offset: i64,
    source: &'static str,
    frequency_bound: Option<FrequencyBound>,
}

fn verify(v: &Potential<f64>, c: &Candidate, trace_bound: Option<f64>, energies: &[f64]) -> CliResult<ScaleCheck> {
    let shifted = v.rebased(c.offset);
    let results = energies
        .par_iter()
        .map(|&e| match c.kind {
            GordonKind::TwoBlock => two_block_bound(e, &shifted, c.length, trace_bound.unwrap()),
            GordonKind::ThreeBlock => three_block_bound(e, &shifted, c.length),
        })
        .collect::<Vec<_>>();
    let mut verified = Vec::new();
    let mut failures = Vec::new();
    let mut required = match c.kind {
        GordonKind::TwoBlock => 0.5 / trace_bound.unwrap(),
        GordonKind::ThreeBlock => 0.5,
    };
    for (&e, r) in energies.iter().zip(results) {
        match r {
            Ok(b) if b.holds => {
                required = b.required;
                verified.push((e, b.attained));
            }
            Ok(b) => failures.push(Failure {
                energy: e,
                reason: format!("attained {} below {}", fmt_g(b.attained), fmt_g(b.required)),
            }),
            Err(quasispec::Error::Certificate(m)) => failures.push(Failure { energy: e, reason: m }),
            Err(other) => return Err(other.into()),
        }
    }
    Ok(ScaleCheck {
        certificate: GordonCertificate {
            kind: c.kind,
            scale: c.level,
            trace_bound: (c.kind == GordonKind::TwoBlock).then(|| trace_bound.unwrap()),
            offset: c.offset,
            verified_energies: verified,
        },
        length: c.length,
        source: c.source,
        required,
        sampled: energies.len(),
        failures,
        frequency_bound: c.frequency_bound,
    })
}

/// Lengths `|S^n(x)|` over the alphabet for `n = 0..=levels`, saturating.
fn image_lengths(rule: &SubstitutionRule, levels: usize) -> Vec<Vec<usize>> {
    let syms = rule.alphabet().symbols();
    let mut lens: Vec<usize> = vec![1; syms.len()];
    let mut out = vec![lens.clone()];
    for _ in 0..levels {
        lens = rule
            .images()
            .iter()
            .map(|img| {
                img.iter().map(|s| lens[syms.iter().position(|&t| t == s).unwrap()]).fold(0, usize::saturating_add)
            })
            .collect();
        out.push(lens.clone());
    }
    out
}

fn substitution_candidates(
    rule: &SubstitutionRule,
    w: &Word,
    n_max: usize,
    two_block: bool,
) -> (Vec<Candidate>, Vec<usize>) {
    let lengths = image_lengths(rule, n_max);
    let mut out = Vec::new();
    let mut bare_squares = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (n, level) in lengths.iter().enumerate().take(n_max + 1).skip(1) {
        // each length is reported at the first level it appears
        let mut ls = level.clone();
        ls.sort_unstable();
        ls.retain(|&l| seen.insert(l));
        for &len in &ls {
            let fourth = find_powers(w, 4, len).into_iter().next();
            let cube = find_powers(w, 3, len).into_iter().next();
            let three = fourth.map(|p| (p, 4, "fourth power")).or(cube.map(|p| (p, 3, "cube")));
            if let Some(((pos, v), k, source)) = three {
                out.push(Candidate {
                    level: n,
                    length: len,
                    kind: GordonKind::ThreeBlock,
                    offset: (pos + len - 1) as i64,
                    source,
                    frequency_bound: Some(frequency_lower_bound(w, &v, k)),
                });
            }
            if let Some((pos, v)) = find_powers(w, 2, len).into_iter().next() {
                if two_block {
                    out.push(Candidate {
                        level: n,
                        length: len,
                        kind: GordonKind::TwoBlock,
                        offset: pos as i64 - 1,
                        source: "square",
                        frequency_bound: Some(frequency_lower_bound(w, &v, 2)),
                    });
                } else {
                    bare_squares.push(len);
                }
            }
        }
    }
    (out, bare_squares)
}

pub fn run(model: &Model, args: &Args, seed: u64, out: &OutputArgs) -> CliResult<()> {
    if let Some(c) = args.trace_bound {
        if !(c >= 1.0) {
            return Err(CliError::usage(format!("--trace-bound {c} must be at least 1")));
        }
    }
    let mut notes = Vec::new();
    let mut digits = None;
    let (word, n_max, trace_bound, candidates) = match (&model.kind, model.sturmian()?) {
        (_, Some((cf, lambda))) => {
            let n_max = args.n_max.unwrap_or(10);
            if n_max == 0 || n_max >= cf.depth() {
                return Err(CliError::usage(format!("--n-max must lie in 1..{}", cf.depth())));
            }
            if let Kind::Sturmian { spec, .. } | Kind::CircleMap { spec, .. } = &model.kind {
                digits = spec.limsup_at_least(4);
            }
            let len = args.length.unwrap_or((6 * cf.q(n_max) as usize).max(MIN_SCAN)).max(4 * cf.q(n_max) as usize);
            let w = model.word(1..=len as i64)?;
            let hits = scan_gordon_scales(&w, &cf, n_max)?;
            let mut cands = Vec::new();
            for n in 1..=n_max {
                for kind in [GordonKind::TwoBlock, GordonKind::ThreeBlock] {
                    if let Some(h) = hits.iter().find(|h| h.level == n && h.kind == kind) {
                        cands.push(Candidate {
                            level: n,
                            length: h.length,
                            kind,
                            offset: h.offset,
                            source: "partition",
                            frequency_bound: None,
                        });
                    }
                }
            }
            (w, n_max, Some(args.trace_bound.unwrap_or(c_lambda(lambda.abs()))), cands)
        }
        (Kind::Substitution { name, rule }, None) => {
            let lengths = image_lengths(rule, 40);
            let widest = |n: usize| lengths[n].iter().copied().max().unwrap();
            let (len, n_max) = match (args.n_max, args.length) {
                (Some(n), l) => {
                    if n == 0 || n > 40 {
                        return Err(CliError::usage("--n-max must lie in 1..=40"));
                    }
                    (l.unwrap_or((8 * widest(n)).max(4096)), n)
                }
                (None, l) => {
                    let len = l.unwrap_or(DEFAULT_SCAN);
                    let n = (1..40).take_while(|&n| 4 * widest(n) <= len).last().unwrap_or(1);
                    (len, n)
                }
            };
            let trace_bound = args.trace_bound.or_else(|| {
                let c = model.coding.entries();
                (name == "fibonacci" && c.len() == 2).then(|| c_lambda((c[1].1 - c[0].1).abs()))
            });
            let w = model.word(1..=len as i64)?;
            let (cands, bare) = substitution_candidates(rule, &w, n_max, trace_bound.is_some());
            if !bare.is_empty() {
                notes.push(format!(
                    "squares of length {bare:?} were found but need a trace bound; pass --trace-bound to use them"
                ));
            }
            (w, n_max, trace_bound, cands)
        }
        _ => return Err(CliError::usage("Gordon scans need a Sturmian or substitution model")),
    };
    if candidates.is_empty() {
        notes.insert(0, format!("no power structure found up to scanned length {}", word.len()));
    }

    // energies from the bands of a moderate-period approximant
    let mut level = 0;
    while level < 60 && model.trace_model(level + 1).is_ok_and(|m| m.period(level + 1) <= ENERGY_PERIOD) {
        level += 1;
    }
    let tm = model.trace_model(level)?;
    let bands = model_bands(tm.as_ref(), level, 1e-12)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let energies = sample_by_measure(&bands.merged(), args.energies, &mut rng);

    let v = Potential::from_word(&word, &model.coding, 1)?;
    let checks = candidates.iter().map(|c| verify(&v, c, trace_bound, &energies)).collect::<CliResult<Vec<_>>>()?;
    let report = Gordon {
        model: model.label(),
        scanned_length: word.len(),
        n_max,
        trace_bound,
        energy_level: level,
        energies,
        digits_limsup_ge_4: digits,
        checks,
        notes,
    };
    emit(&report, out)
}
