use serde::{Deserialize, Serialize};

use super::matrix::{vec_norm, Mat2};
use super::potential::{Coding, Potential};
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};
use crate::symbolic::Word;

const RENORM_EVERY: usize = 32;

/// One-step transfer matrix `[[E − v, −1], [1, 0]]`.
pub fn elementary_matrix<T: Real>(e: T, v: T) -> Mat2<T> {
    Mat2::new(e - v, -T::one(), T::one(), T::zero())
}

/// Closed-form inverse of [`elementary_matrix`].
fn elementary_inverse<T: Real>(e: T, v: T) -> Mat2<T> {
    Mat2::new(T::zero(), T::one(), -T::one(), e - v)
}

/// `M_E(n)`: `T(n)⋯T(1)` for `n ≥ 1`, the identity for `n = 0` and
/// `T(n+1)⁻¹⋯T(0)⁻¹` for `n ≤ −1`.
pub fn transfer<T: Real>(e: T, v: &Potential<T>, n: i64) -> Result<Mat2<T>> {
    let mut m = Mat2::identity();
    if n >= 1 {
        v.require(1, n)?;
        for site in 1..=n {
            m = elementary_matrix(e, v.at(site)?) * m;
        }
    } else if n <= -1 {
        v.require(n + 1, 0)?;
        for site in (n + 1..=0).rev() {
            m = elementary_inverse(e, v.at(site)?) * m;
        }
    }
    Ok(m)
}

/// `M_E(a₁⋯aₙ) = M_E(aₙ)⋯M_E(a₁)`.
pub fn word_matrix<T: Real>(e: T, w: &Word, coding: &Coding<T>) -> Result<Mat2<T>> {
    let mut m = Mat2::identity();
    for s in w.iter() {
        m = elementary_matrix(e, coding.value(s)?) * m;
    }
    Ok(m)
}

/// A solution of `φ(n+1) + φ(n−1) + V(n)φ(n) = Eφ(n)` stored on consecutive sites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionVector<T> {
    first_site: i64,
    phi: Vec<T>,
}

impl<T: Real> SolutionVector<T> {
    pub fn first_site(&self) -> i64 {
        self.first_site
    }

    pub fn last_site(&self) -> i64 {
        self.first_site + self.phi.len() as i64 - 1
    }

    pub fn values(&self) -> &[T] {
        &self.phi
    }

    pub fn phi(&self, site: i64) -> Option<T> {
        let i = usize::try_from(site - self.first_site).ok()?;
        self.phi.get(i).copied()
    }

    /// `Φ(n) = (φ(n+1), φ(n))`.
    pub fn state(&self, n: i64) -> Option<[T; 2]> {
        Some([self.phi(n + 1)?, self.phi(n)?])
    }

    pub fn state_norm(&self, n: i64) -> Option<T> {
        self.state(n).map(vec_norm)
    }
}

/// Iterates the eigenvalue equation from `Φ(0) = phi0` so that `Φ(n)` is
/// available for every `n` in `lo..=hi`.
pub fn solve<T: Real>(e: T, v: &Potential<T>, phi0: [T; 2], lo: i64, hi: i64) -> Result<SolutionVector<T>> {
    if !(vec_norm(phi0) > T::zero()) {
        return Err(Error::Precondition("initial vector must be nonzero".into()));
    }
    if lo > hi {
        return Err(Error::Range(format!("empty range {lo}..={hi}")));
    }
    let first = lo.min(0);
    let last = hi.max(0) + 1;
    // forward recursion needs V(1..=last−1), backward V(first+1..=0)
    v.require(1, last - 1)?;
    v.require(first + 1, 0)?;
    let mut phi = vec![T::zero(); (last - first + 1) as usize];
    let idx = |site: i64| (site - first) as usize;
    phi[idx(1)] = phi0[0];
    phi[idx(0)] = phi0[1];
    for m in 1..last {
        phi[idx(m + 1)] = (e - v.at(m)?) * phi[idx(m)] - phi[idx(m - 1)];
    }
    for m in (first + 1..=0).rev() {
        phi[idx(m - 1)] = (e - v.at(m)?) * phi[idx(m)] - phi[idx(m + 1)];
    }
    Ok(SolutionVector { first_site: first, phi })
}

/// Canonical pair: `φ₁(0) = 0, φ₁(1) = 1` and `φ₂(0) = 1, φ₂(1) = 0`.
pub fn canonical_pair<T: Real>(e: T, v: &Potential<T>, lo: i64, hi: i64) -> Result<(SolutionVector<T>, SolutionVector<T>)> {
    Ok((solve(e, v, [T::one(), T::zero()], lo, hi)?, solve(e, v, [T::zero(), T::one()], lo, hi)?))
}

/// Running product `T(n)⋯T(1)` kept at unit scale, together with the
/// accumulated log-scale.
#[derive(Debug, Clone, Copy)]
pub struct RenormalizedProduct<T> {
    pub matrix: Mat2<T>,
    pub log_scale: T,
}

impl<T: Real> RenormalizedProduct<T> {
    pub fn log_norm(&self) -> T {
        self.matrix.norm().ln() + self.log_scale
    }
}

/// Product over sites `1..=n` with rescaling every 32 steps.
pub fn renormalized_transfer<T: Real>(e: T, v: &Potential<T>, n: usize) -> Result<RenormalizedProduct<T>> {
    v.require(1, n as i64)?;
    let mut m = Mat2::identity();
    let mut log_scale = T::zero();
    for (k, &vk) in v.values()[(1 - v.start()) as usize..][..n].iter().enumerate() {
        m = elementary_matrix(e, vk) * m;
        if (k + 1) % RENORM_EVERY == 0 {
            let s = m.max_abs();
            m = m.scale(s.recip());
            log_scale += s.ln();
        }
    }
    Ok(RenormalizedProduct { matrix: m, log_scale })
}

/// Finite-`n` Lyapunov exponent `(1/n) ln‖M_E(n)‖` (spectral norm).
pub fn lyapunov_estimate<T: Real>(e: T, v: &Potential<T>, n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::Precondition("lyapunov_estimate needs n ≥ 1".into()));
    }
    Ok(renormalized_transfer(e, v, n)?.log_norm() / from_usize(n))
}

/// `‖φ‖_L = (Σ_{n=1}^{⌊L⌋} |φ(n)|² + (L − ⌊L⌋)|φ(⌊L⌋+1)|²)^{1/2}`.
pub fn truncated_norm<T: Real>(phi: &SolutionVector<T>, l: T) -> Result<T> {
    if !(l >= T::one()) {
        return Err(Error::Range(format!("truncation length {l} must be at least 1")));
    }
    let whole = l.floor();
    let m = whole.to_i64().ok_or_else(|| Error::Range(format!("truncation length {l} too large")))?;
    if phi.first_site() > 1 || phi.last_site() < m + 1 {
        return Err(Error::Range(format!(
            "solution known on {}..={} but sites 1..={} are needed",
            phi.first_site(),
            phi.last_site(),
            m + 1
        )));
    }
    let mut sum = T::zero();
    for n in 1..=m {
        let x = phi.phi(n).unwrap();
        sum += x * x;
    }
    let tail = phi.phi(m + 1).unwrap();
    Ok((sum + (l - whole) * tail * tail).sqrt())
}

/// Log of truncated norms of the solution with `Φ(0) = phi0`, evaluated at
/// ascending `ls` without materializing `φ` (so exponential growth cannot
/// overflow).
fn log_truncated_norms<T: Real>(e: T, v: &Potential<T>, phi0: [T; 2], ls: &[T]) -> Result<Vec<T>> {
    let big = lit::<T>(1e100);
    // (u, w) = (φ(n+1), φ(n)) · e^{−scale}; sum = Σ_{k≤n} φ(k)² · e^{−2 scale}
    let (mut u, mut w) = (phi0[0], phi0[1]);
    let mut scale = T::zero();
    let mut sum = T::zero();
    let mut n = 0i64;
    let mut out = Vec::with_capacity(ls.len());
    for &l in ls {
        let m = l.floor().to_i64().unwrap();
        while n < m {
            let next = (e - v.at(n + 1)?) * u - w;
            w = u;
            u = next;
            n += 1;
            sum += w * w;
            let size = u.abs().max(w.abs());
            if size > big {
                let r = size.recip();
                u *= r;
                w *= r;
                sum *= r * r;
                scale += size.ln();
            }
        }
        out.push(scale + T::from_f64(0.5).unwrap() * (sum + (l - l.floor()) * u * u).ln());
    }
    Ok(out)
}

/// `‖φ₁‖_L^{2−α} / ‖φ₂‖_L^{α}` for the canonical pair, at each `L` of the grid.
///
/// At `L = 1` the denominator `|φ₂(1)|` vanishes and the ratio is `+∞`.
pub fn jl_ratio<T: Real>(e: T, v: &Potential<T>, alpha: T, l_grid: &[T]) -> Result<Vec<T>> {
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(Error::Precondition(format!("exponent {alpha} outside (0, 1]")));
    }
    if let Some(bad) = l_grid.iter().find(|l| !(**l >= T::one())) {
        return Err(Error::Range(format!("truncation length {bad} must be at least 1")));
    }
    let l_max = l_grid.iter().copied().fold(T::one(), T::max);
    v.require(1, l_max.floor().to_i64().unwrap())?;
    let mut order: Vec<usize> = (0..l_grid.len()).collect();
    order.sort_by(|&i, &j| l_grid[i].partial_cmp(&l_grid[j]).unwrap());
    let sorted: Vec<T> = order.iter().map(|&i| l_grid[i]).collect();
    let n1 = log_truncated_norms(e, v, [T::one(), T::zero()], &sorted)?;
    let n2 = log_truncated_norms(e, v, [T::zero(), T::one()], &sorted)?;
    let two = lit::<T>(2.0);
    let mut out = vec![T::zero(); l_grid.len()];
    for (k, &i) in order.iter().enumerate() {
        out[i] = ((two - alpha) * n1[k] - alpha * n2[k]).exp();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero(range: std::ops::RangeInclusive<i64>) -> Potential<f64> {
        Potential::constant(0.0, range)
    }

    #[test]
    fn elementary_examples() {
        assert_eq!(elementary_matrix(1.0, 0.0), Mat2::new(1.0, -1.0, 1.0, 0.0));
        assert_eq!(elementary_matrix(0.7, 0.7), Mat2::new(0.0, -1.0, 1.0, 0.0));
    }

    #[test]
    fn transfer_conventions() {
        let v = zero(-10..=10);
        assert_eq!(transfer(0.3, &v, 0).unwrap(), Mat2::identity());
        assert_eq!(transfer(0.0, &v, 4).unwrap(), Mat2::identity());
        let w = Potential::new(-3, vec![0.5, -1.0, 2.0, 0.25, 1.5]);
        let m = transfer(0.4, &w, -1).unwrap();
        assert_eq!(m * elementary_matrix(0.4, 0.25), Mat2::identity());
        assert!(transfer(0.4, &w, 3).is_err());
        // M(−2)·M(2) composes through the cocycle M(n+m) = M_shift(m) M(n)
        let back = transfer(0.4, &w, -2).unwrap();
        let expected = (elementary_matrix(0.4, 0.25) * elementary_matrix(0.4, 2.0)).adjugate();
        assert!((back - expected).max_abs() < 1e-15);
    }

    #[test]
    fn word_matrix_reverses_order() {
        let c = Coding::sturmian(1.0);
        let m = word_matrix(0.0, &Word::from("10"), &c).unwrap();
        let direct = elementary_matrix(0.0, 0.0) * elementary_matrix(0.0, 1.0);
        assert_eq!(m, direct);
        let v = Potential::from_word(&Word::from("1011010110"), &c, 1).unwrap();
        let t = transfer(0.37, &v, 10).unwrap();
        let wm = word_matrix(0.37, &Word::from("1011010110"), &c).unwrap();
        assert!((t - wm).max_abs() < 1e-12);
    }

    #[test]
    fn free_solutions() {
        let v = zero(-200..=200);
        let s = solve(0.0, &v, [1.0, 0.0], -50, 50).unwrap();
        for n in -50..=50 {
            assert!((s.state_norm(n).unwrap() - 1.0).abs() < 1e-14);
        }
        let g = (3.0 + 5f64.sqrt()) / 2.0;
        let s = solve(3.0, &v, [0.6, 0.8], 0, 40).unwrap();
        let rate = (s.state_norm(40).unwrap() / s.state_norm(20).unwrap()).ln() / 20.0;
        assert!((rate - g.ln()).abs() < 1e-9);
        assert!(solve(3.0, &v, [0.0, 0.0], 0, 4).is_err());
        assert!(solve(3.0, &v, [1.0, 0.0], 0, 400).is_err());
    }

    #[test]
    fn solution_matches_transfer() {
        let vals: Vec<f64> = (0..61).map(|i| ((i * 7919) % 13) as f64 / 5.0).collect();
        let v = Potential::new(-30, vals);
        let s = solve(0.8, &v, [0.3, -1.1], -25, 25).unwrap();
        for n in [-25i64, -7, -1, 0, 1, 9, 25] {
            let m = transfer(0.8, &v, n).unwrap().apply([0.3, -1.1]);
            let st = s.state(n).unwrap();
            assert!((m[0] - st[0]).abs() <= 1e-9 * vec_norm(m).max(1.0));
            assert!((m[1] - st[1]).abs() <= 1e-9 * vec_norm(m).max(1.0));
        }
    }

    #[test]
    fn wronskian_is_constant() {
        let vals: Vec<f64> = (0..41).map(|i| (i as f64 * 0.618).fract() * 3.0).collect();
        let v = Potential::new(-20, vals);
        let (p1, p2) = canonical_pair(0.2, &v, -15, 15).unwrap();
        for n in -15..=15 {
            let w = p1.phi(n + 1).unwrap() * p2.phi(n).unwrap() - p1.phi(n).unwrap() * p2.phi(n + 1).unwrap();
            assert!((w - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn lyapunov_free() {
        let v = zero(0..=10_000);
        assert!(lyapunov_estimate(0.0, &v, 10_000).unwrap().abs() <= 1e-3);
        let g = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((lyapunov_estimate(3.0, &v, 10_000).unwrap() - g).abs() <= 1e-3);
        assert!(lyapunov_estimate(3.0, &v, 0).is_err());
    }

    #[test]
    fn truncated_norms() {
        let one = SolutionVector { first_site: 0, phi: vec![1.0; 10] };
        assert!((truncated_norm(&one, 2.5).unwrap() - 2.5f64.sqrt()).abs() < 1e-15);
        assert!((truncated_norm(&one, 4.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(truncated_norm(&one, 0.5).is_err());
        assert!(truncated_norm(&one, 9.0).is_err());
    }

    #[test]
    fn jl_ratio_free_is_bounded() {
        let v = zero(0..=2000);
        let grid: Vec<f64> = (2..2000).step_by(37).map(|l| l as f64 + 0.3).collect();
        let r = jl_ratio(0.0, &v, 1.0, &grid).unwrap();
        assert!(r.iter().all(|&x| x > 0.3 && x < 3.0));
        // agrees with the direct formula
        let (p1, p2) = canonical_pair(0.0, &v, 0, 100).unwrap();
        let direct = truncated_norm(&p1, 50.7).unwrap() / truncated_norm(&p2, 50.7).unwrap();
        let r = jl_ratio(0.0, &v, 1.0, &[50.7]).unwrap()[0];
        assert!((r - direct).abs() < 1e-12);
        assert!(jl_ratio(0.0, &v, 0.5, &[1.0]).unwrap()[0].is_infinite());
    }

    #[test]
    fn jl_ratio_survives_exponential_growth() {
        let v = zero(0..=5000);
        // both norms overflow f64 long before L = 4999; their ratio does not
        let r = jl_ratio(5.0, &v, 1.0, &[10.0, 4999.0]).unwrap();
        assert!(r.iter().all(|x| x.is_finite() && *x > 0.0));
    }
}
