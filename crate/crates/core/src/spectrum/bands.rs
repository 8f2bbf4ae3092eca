use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::intervals::IntervalSet;
use crate::error::{Error, Result};
use crate::operator::Potential;
use crate::scalar::{lit, Real};
use crate::symbolic::ContinuedFraction;
use crate::tracemap::{SturmianModel, TraceModel};

/// `[−2 + min V, 2 + max V]`, which contains the spectrum.
pub fn spectrum_bounds<T: Real>(v: &Potential<T>) -> [T; 2] {
    let two = lit::<T>(2.0);
    [v.min() - two, v.max() + two]
}

/// The `q` bands `{E : |x_n(E)| ≤ 2}` of a level-`n` periodic approximant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandList<T> {
    pub level: usize,
    pub lambda: T,
    pub tol: T,
    /// One closed interval per band, in increasing order; neighbours may touch.
    pub bands: Vec<[T; 2]>,
    /// `touching[i]`: bands `i` and `i + 1` are closer than `tol`.
    pub touching: Vec<bool>,
    pub measure: T,
}

impl<T: Real> BandList<T> {
    fn new(level: usize, lambda: T, tol: T, bands: Vec<[T; 2]>) -> Self {
        let touching = bands.windows(2).map(|w| w[1][0] - w[0][1] < tol).collect();
        let mut b = Self { level, lambda, tol, bands, touching, measure: T::zero() };
        b.measure = b.merged().measure();
        b
    }

    pub fn count(&self) -> usize {
        self.bands.len()
    }

    /// Disjoint union with touching bands merged.
    pub fn merged(&self) -> IntervalSet<T> {
        IntervalSet::from_intervals(self.bands.clone(), self.tol)
    }

    pub fn contains(&self, e: T) -> bool {
        let i = self.bands.partition_point(|b| b[1] < e);
        i < self.bands.len() && self.bands[i][0] <= e
    }
}

/// Total length of the band set.
pub fn band_measure<T: Real>(b: &BandList<T>) -> T {
    b.measure
}

/// Splits `[lo, hi]` at the boundary of a predicate that is true on a left
/// part and false on a right part; iterates to adjacent floating-point values.
fn bisect<T: Real>(mut lo: T, mut hi: T, pred: impl Fn(T) -> bool) -> T {
    let half = lit::<T>(0.5);
    for _ in 0..256 {
        let mid = lo + (hi - lo) * half;
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo + (hi - lo) * half
}

/// Largest period for which the dense periodic/antiperiodic fallback runs.
pub const DENSE_FALLBACK_MAX: usize = 4096;

/// Band set of `model` at `level`.
///
/// The `q − 1` Dirichlet eigenvalues of one period (sites `1..q−1`) lie in the
/// closed gaps, where `|x| ≥ 2`, so they split the energy axis into `q`
/// segments holding one band each. The sign of `x` at the `k`-th separator is
/// `(−1)^{q−k}` because `x` is monic of degree `q`. Inside a segment both band
/// edges are located by bisection on `x ∓ 2`, and edges of closed gaps are
/// snapped onto the separator.
///
/// Bands narrower than the error of a separator break the sign pattern; the
/// edges are then taken as eigenvalues of the periodic (`x = 2`) and
/// antiperiodic (`x = −2`) operators on one period.
pub fn model_bands<T: Real, M: TraceModel<T> + ?Sized>(model: &M, level: usize, tol: T) -> Result<BandList<T>> {
    if !(tol > T::zero()) {
        return Err(Error::Precondition(format!("tolerance {tol} must be positive")));
    }
    if level > model.max_level() {
        return Err(Error::Range(format!("level {level} above the model's maximum {}", model.max_level())));
    }
    let values = model.period_values(level);
    let bands = match bisected_bands(model, level, &values, tol) {
        Ok(b) => b,
        Err(Error::Resolution(msg)) if values.len() > DENSE_FALLBACK_MAX => return Err(Error::Resolution(msg)),
        Err(Error::Resolution(_)) => dense_bands(&values)?,
        Err(e) => return Err(e),
    };
    Ok(BandList::new(level, model.lambda(), tol, bands))
}

fn bisected_bands<T: Real, M: TraceModel<T> + ?Sized>(
    model: &M,
    level: usize,
    values: &[T],
    tol: T,
) -> Result<Vec<[T; 2]>> {
    let q = values.len();
    let (vmin, vmax) = values.iter().fold((T::infinity(), T::neg_infinity()), |(a, b), &v| (a.min(v), b.max(v)));
    let margin = lit::<T>(2.5);
    let mut separators = vec![vmin - margin];
    if q > 1 {
        let off = vec![T::one(); q - 2];
        let mu = T::sym_tridiagonal_eigenvalues(&values[..q - 1], &off)
            .ok_or_else(|| Error::Backend("tridiagonal eigenvalue solver did not converge".into()))?;
        separators.extend(mu);
    }
    separators.push(vmax + margin);

    let two = lit::<T>(2.0);
    let x = |e: T| model.trace(e, level);
    let bands: Vec<[T; 2]> = (0..q)
        .into_par_iter()
        .map(|j| {
            let (l, r) = (separators[j], separators[j + 1]);
            let s = if (q - j).is_multiple_of(2) { T::one() } else { -T::one() };
            let (fl, fr) = (s * x(l), s * x(r));
            if !(fl >= -two && fr <= two) || l > r {
                return Err(Error::Resolution(format!(
                    "level {level}, band {j}: trace sign pattern broken on [{l}, {r}]"
                )));
            }
            // the separators are outside the band in exact arithmetic even when
            // |x| rounds to 2 there, so neither end is trusted as a band edge
            let mut left = bisect(l, r, |e| s * x(e) > two);
            let mut right = bisect(left, r, |e| s * x(e) >= -two);
            // at a closed gap x − 2 has a double root and bisection stops up to
            // √ε away; snap to the separator when x never leaves ±2 in between
            let flat = |y: T| (y - two).abs() <= lit(1e-9);
            if left > l && flat(fl) && flat(s * x(l + (left - l) * lit(0.5))) {
                left = l;
            }
            if right < r && flat(-fr) && flat(-s * x(right + (r - right) * lit(0.5))) {
                right = r;
            }
            Ok([left, right])
        })
        .collect::<Result<_>>()?;
    if bands.windows(2).any(|w| w[1][0] < w[0][1] - tol) {
        return Err(Error::Resolution(format!("level {level}: overlapping bands")));
    }
    Ok(bands)
}

/// Band edges as the sorted union of periodic and antiperiodic eigenvalues.
fn dense_bands<T: Real>(values: &[T]) -> Result<Vec<[T; 2]>> {
    let q = values.len();
    let mut edges = Vec::with_capacity(2 * q);
    for sign in [T::one(), -T::one()] {
        let mut a = vec![T::zero(); q * q];
        for i in 0..q {
            a[i * q + i] = values[i];
            if i + 1 < q {
                a[(i + 1) * q + i] = T::one();
            }
        }
        if q == 1 {
            a[0] += lit::<T>(2.0) * sign;
        } else if q == 2 {
            a[q] += sign;
        } else {
            a[(q - 1) * q] += sign;
        }
        edges.extend(
            T::sym_dense_eigenvalues(&mut a, q)
                .ok_or_else(|| Error::Backend("dense eigenvalue solver did not converge".into()))?,
        );
    }
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(edges.chunks_exact(2).map(|c| [c[0], c[1]]).collect())
}

/// Level-`n` band set of the Sturmian model with rotation number given by `cf`
/// and coupling `lambda`.
pub fn approx_bands<T: Real>(lambda: T, cf: &ContinuedFraction, n: usize, tol: T) -> Result<BandList<T>> {
    let model = SturmianModel::new(cf, lambda, n)?;
    model_bands(&model, n, tol)
}

/// Finite-stage proxy for `⋂_k ⋃_{n≥k} {|x_n| ≤ 2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedSpectrum<T> {
    pub k: usize,
    pub n: usize,
    /// `⋃_{m=k..n}` of the band sets.
    pub outer: IntervalSet<T>,
    /// `outer ∩ ⋃_{m=k+1..n}`.
    pub inner: IntervalSet<T>,
}

pub fn model_nested_spectrum<T: Real, M: TraceModel<T> + ?Sized>(
    model: &M,
    n: usize,
    k: usize,
    tol: T,
) -> Result<NestedSpectrum<T>> {
    if k > n {
        return Err(Error::Precondition(format!("stage k = {k} above level n = {n}")));
    }
    let mut sets = Vec::with_capacity(n - k + 1);
    for m in k..=n {
        sets.push(model_bands(model, m, tol)?.merged());
    }
    let outer = sets.iter().fold(IntervalSet::empty(), |acc, s| acc.union(s));
    let tail = sets[1..].iter().fold(IntervalSet::empty(), |acc, s| acc.union(s));
    let inner = if k == n { outer.clone() } else { outer.intersection(&tail) };
    Ok(NestedSpectrum { k, n, outer, inner })
}

pub fn nested_spectrum<T: Real>(
    lambda: T,
    cf: &ContinuedFraction,
    n: usize,
    k: usize,
    tol: T,
) -> Result<NestedSpectrum<T>> {
    let model = SturmianModel::new(cf, lambda, n)?;
    model_nested_spectrum(&model, n, k, tol)
}
