use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{elementary_matrix, Mat2};
use crate::scalar::{lit, Real};
use crate::symbolic::ContinuedFraction;

/// Magnitude at which trace orbits are clamped and truncated.
pub const TRACE_CLAMP: f64 = 1e150;

/// Consecutive increases required after a threshold crossing to certify escape.
pub const ESCAPE_RUN: usize = 3;

/// `C_λ = 2 + √(8 + λ²)`.
pub fn c_lambda<T: Real>(lambda: T) -> T {
    lit::<T>(2.0) + (lit::<T>(8.0) + lambda * lambda).sqrt()
}

/// Traces `x_k` for `k = first_index, first_index + 1, …`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceOrbit<T> {
    pub first_index: i64,
    pub values: Vec<T>,
    pub escape_index: Option<i64>,
    pub bound_used: T,
    /// The orbit was cut short because the next value exceeded the clamp.
    pub saturated: bool,
}

impl<T: Real> TraceOrbit<T> {
    pub fn new(first_index: i64, values: Vec<T>, bound: T, saturated: bool) -> Self {
        let escape = find_escape(&values, bound, saturated).map(|i| first_index + i as i64);
        Self { first_index, values, escape_index: escape, bound_used: bound, saturated }
    }

    pub fn last_index(&self) -> i64 {
        self.first_index + self.values.len() as i64 - 1
    }

    pub fn get(&self, n: i64) -> Option<T> {
        usize::try_from(n - self.first_index).ok().and_then(|i| self.values.get(i).copied())
    }

    /// `(n, x_n)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (i64, T)> + '_ {
        self.values.iter().enumerate().map(move |(i, &x)| (self.first_index + i as i64, x))
    }

    /// Largest `|x_n|` over the computed orbit.
    pub fn sup(&self) -> T {
        self.values.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }
}

fn find_escape<T: Real>(values: &[T], bound: T, saturated: bool) -> Option<usize> {
    (0..values.len()).find(|&m| {
        if !(values[m].abs() > bound) {
            return false;
        }
        let end = (m + ESCAPE_RUN).min(values.len() - 1);
        let rising = (m..end).all(|k| values[k + 1].abs() > values[k].abs());
        rising && (end == m + ESCAPE_RUN || (saturated && end == values.len() - 1))
    })
}

/// Clamped trace of a matrix, or `None` when the entries have left the
/// representable range.
pub(crate) fn clamped_trace<T: Real>(m: &Mat2<T>) -> Option<(T, bool)> {
    let clamp = lit::<T>(TRACE_CLAMP);
    let t = m.trace();
    if !m.is_finite() || !t.is_finite() {
        return None;
    }
    if t.abs() > clamp || m.max_abs() > clamp * clamp {
        Some((clamp.copysign(t), true))
    } else {
        Some((t, false))
    }
}

/// Transfer matrices `M_n = M_E(s_n)` from the recursion
/// `M_n = M_{n−2} M_{n−1}^{a_n}` (with `M_1 = M_{−1} M_0^{a_1 − 1}`), for
/// `n = −1..=n_max`. Stops early once entries exceed the clamp.
pub(crate) fn sturmian_matrices<T: Real>(e: T, lambda: T, cf: &ContinuedFraction, n_max: usize) -> Vec<Mat2<T>> {
    let clamp = lit::<T>(TRACE_CLAMP);
    let mut mats = vec![elementary_matrix(e, lambda), elementary_matrix(e, T::zero())];
    for n in 1..=n_max {
        let k = if n == 1 { cf.a(1) - 1 } else { cf.a(n) };
        let prev = mats[mats.len() - 1];
        let prev2 = mats[mats.len() - 2];
        let Some(p) = bounded_power(&prev, k, clamp) else { break };
        let m = prev2 * p;
        if !m.is_finite() {
            break;
        }
        let stop = m.max_abs() > clamp;
        mats.push(m);
        if stop {
            break;
        }
    }
    mats
}

/// `M^k` via `M^j = tr(M)·M^{j−1} − M^{j−2}`; `None` once entries pass `limit²`.
fn bounded_power<T: Real>(m: &Mat2<T>, k: u64, limit: T) -> Option<Mat2<T>> {
    let t = m.trace();
    let mut prev = Mat2::identity();
    if k == 0 {
        return Some(prev);
    }
    let mut cur = *m;
    for _ in 1..k {
        let next = cur.scale(t) - prev;
        if !(next.max_abs() <= limit * limit) {
            return None;
        }
        prev = cur;
        cur = next;
    }
    Some(cur)
}

/// Traces `x_n = tr M_E(s_n)`, `n = −1..=n_max`, for the Sturmian potential
/// with coding `1 ↦ λ`, `0 ↦ 0`. Escape is judged against `C_λ`.
pub fn sturmian_traces<T: Real>(e: T, lambda: T, cf: &ContinuedFraction, n_max: usize) -> Result<TraceOrbit<T>> {
    if n_max > cf.depth() {
        return Err(Error::Precondition(format!(
            "trace level {n_max} exceeds continued fraction depth {}",
            cf.depth()
        )));
    }
    let mats = sturmian_matrices(e, lambda, cf, n_max);
    let mut values = Vec::with_capacity(mats.len());
    let mut saturated = false;
    for m in &mats {
        match clamped_trace(m) {
            Some((t, sat)) => {
                values.push(t);
                if sat {
                    saturated = true;
                    break;
                }
            }
            None => {
                saturated = true;
                break;
            }
        }
    }
    if values.len() < n_max + 2 && !saturated {
        saturated = true;
    }
    Ok(TraceOrbit::new(-1, values, c_lambda(lambda), saturated))
}

/// One step of the Fibonacci trace map: `x·y − z` for
/// `(x, y, z) = (x_{n−1}, x_{n−2}, x_{n−3})`.
pub fn fibonacci_step<T: Real>(x: T, y: T, z: T) -> T {
    x * y - z
}

/// Iterates [`fibonacci_step`] from `(x_{−1}, x_0, x_1)` and returns
/// `x_{−1}, …, x_n`.
pub fn fibonacci_orbit<T: Real>(seed: [T; 3], n: usize) -> Vec<T> {
    let mut xs = seed.to_vec();
    while xs.len() < n + 2 {
        let k = xs.len();
        xs.push(fibonacci_step(xs[k - 1], xs[k - 2], xs[k - 3]));
    }
    xs.truncate(n + 2);
    xs
}

/// Outcome of the trace-escape test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    /// The orbit escaped past `C_λ` from this level on.
    CertifiedOut { level: i64 },
    /// No escape detected up to this level.
    UndecidedIn { levels: i64 },
}

impl Classification {
    pub fn is_out(&self) -> bool {
        matches!(self, Classification::CertifiedOut { .. })
    }
}

/// Classifies `E` by escape of the Sturmian trace orbit up to `n_max`.
pub fn classify_energy<T: Real>(e: T, lambda: T, cf: &ContinuedFraction, n_max: usize) -> Result<Classification> {
    let orbit = sturmian_traces(e, lambda, cf, n_max)?;
    Ok(match orbit.escape_index {
        Some(level) => Classification::CertifiedOut { level },
        None => Classification::UndecidedIn { levels: n_max as i64 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{word_matrix, Coding};
    use crate::symbolic::{continued_fraction, sturmian_blocks, AlphaSpec};

    fn golden(depth: usize) -> ContinuedFraction {
        continued_fraction(&AlphaSpec::golden(), depth).unwrap()
    }

    #[test]
    fn free_traces_stay_bounded() {
        let cf = golden(12);
        for k in 0..50 {
            let e = -2.0 + 4.0 * k as f64 / 49.0;
            let o = sturmian_traces(e, 0.0, &cf, 10).unwrap();
            assert!(o.values.iter().all(|x| x.abs() <= 2.0 + 1e-9), "E = {e}");
            assert_eq!(o.values.len(), 12);
        }
    }

    #[test]
    fn traces_match_word_products() {
        let cf = golden(10);
        let blocks = sturmian_blocks(&cf, 8).unwrap();
        let coding = Coding::<f64>::sturmian(1.0);
        let o = sturmian_traces(0.0, 1.0, &cf, 8).unwrap();
        for (i, b) in blocks.iter().enumerate() {
            let t = word_matrix(0.0, b, &coding).unwrap().trace();
            assert!((o.values[i] - t).abs() <= 1e-8 * t.abs().max(1.0));
        }
    }

    #[test]
    fn escape_far_outside() {
        let cf = golden(12);
        let o = sturmian_traces(10.0, 4.0, &cf, 6).unwrap();
        assert!(o.escape_index.is_some());
        assert!(classify_energy(10.0, 1.0, &cf, 12).unwrap().is_out());
        assert!(!classify_energy(0.0, 0.0, &cf, 12).unwrap().is_out());
    }

    #[test]
    fn saturation_truncates() {
        let cf = golden(40);
        let o = sturmian_traces(50.0f64, 4.0, &cf, 40).unwrap();
        assert!(o.saturated);
        assert!(o.values.len() < 42);
        assert!(o.values.iter().all(|x| x.is_finite()));
        assert!(o.escape_index.is_some());
    }

    #[test]
    fn fibonacci_step_examples() {
        assert_eq!(fibonacci_step(2.0, 2.0, 2.0), 2.0);
        assert_eq!(fibonacci_step(1.0, 0.0, -1.0), 1.0);
        assert_eq!(fibonacci_orbit([2.0, 2.0, 2.0], 5), vec![2.0; 7]);
    }

    #[test]
    fn c_lambda_values() {
        assert_eq!(c_lambda(1.0), 5.0);
        assert!((c_lambda(4.0) - (2.0 + 24f64.sqrt())).abs() < 1e-15);
    }
}
