use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hamiltonian::{LatticeHamiltonian, Propagator};
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};

/// Fraction of the box (on each side) watched by the reflection guard.
pub const OUTER_FRACTION: f64 = 0.1;

/// Mass in the outer sites above which samples count as contaminated.
pub const REFLECTION_MASS: f64 = 1e-6;

/// `K_T(ω) = (1/T)∫₀ᵀ e^{−iωt} dt = (1 − e^{−iωT})/(iωT)`, `K_T(0) = 1`.
pub fn kernel<T: Real>(omega: T, t: T) -> Complex<T> {
    let x = omega * t;
    if x.abs() < lit(1e-4) {
        let x2 = x * x;
        return Complex::new(T::one() - x2 / lit(6.0), -x / lit(2.0) + x * x2 / lit(24.0));
    }
    Complex::new(x.sin() / x, (x.cos() - T::one()) / x)
}

/// Cesàro moments `⟨⟨|X|^p⟩⟩(T)` of one initial state, from the
/// eigendecomposition and the matrix `W_{jk} = Σ_n |n|^p v_j(n) v_k(n)`.
pub struct MomentEvaluator<'a, T> {
    prop: &'a Propagator<T>,
    p: T,
    coeffs: Vec<T>,
    active: Vec<usize>,
    gram: Vec<T>,
}

impl<'a, T: Real> MomentEvaluator<'a, T> {
    pub fn new(prop: &'a Propagator<T>, psi0: &[T], p: T) -> Result<Self> {
        let d = prop.dim();
        if psi0.len() != d {
            return Err(Error::Precondition(format!("initial state has {} entries, box has {d}", psi0.len())));
        }
        let norm = psi0.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
        if !((norm - T::one()).abs() <= lit(1e-10)) {
            return Err(Error::Precondition(format!("initial state has norm {norm}, expected 1")));
        }
        if !(p >= T::zero()) {
            return Err(Error::Precondition(format!("moment order {p} must be nonnegative")));
        }
        let coeffs = prop.coefficients(psi0);
        let cmax = coeffs.iter().fold(T::zero(), |m, c| m.max(c.abs()));
        let cut = cmax * lit(1e-14);
        let active = (0..d).filter(|&k| coeffs[k].abs() > cut).collect();
        let half = prop.half_width() as i64;
        let weights: Vec<T> = (0..d).map(|i| from_usize::<T>((i as i64 - half).unsigned_abs() as usize).powf(p)).collect();
        let gram = T::weighted_gram(prop.vectors(), &weights, d);
        Ok(Self { prop, p, coeffs, active, gram })
    }

    pub fn order(&self) -> T {
        self.p
    }

    /// `Σ_j c_j² W_jj + 2 Σ_{j<k} c_j c_k W_jk sinc((E_j − E_k)T)`; the
    /// imaginary part of the kernel cancels in the symmetric sum.
    pub fn moment(&self, t: T) -> T {
        let d = self.prop.dim();
        let e = self.prop.eigenvalues();
        let (c, w, act) = (&self.coeffs, &self.gram, &self.active);
        // sin((E_j − E_k)T) from per-index phases, so the double sum has no
        // transcendental calls
        let phase: Vec<(T, T, T)> = act.iter().map(|&j| (e[j] * t, (e[j] * t).sin(), (e[j] * t).cos())).collect();
        let small = lit::<T>(1e-3);
        let (c6, c120) = (lit::<T>(6.0), lit::<T>(120.0));
        (0..act.len())
            .into_par_iter()
            .map(|b| {
                let k = act[b];
                let col = &w[k * d..(k + 1) * d];
                let (xk, sk, ck) = phase[b];
                let mut cross = T::zero();
                for (a, &j) in act[..b].iter().enumerate() {
                    let (xj, sj, cj) = phase[a];
                    let x = xj - xk;
                    let sinc = if x.abs() < small {
                        let x2 = x * x;
                        T::one() - x2 / c6 + x2 * x2 / c120
                    } else {
                        (sj * ck - cj * sk) / x
                    };
                    cross += c[j] * col[j] * sinc;
                }
                c[k] * (col[k] * c[k] + lit::<T>(2.0) * cross)
            })
            .reduce(T::zero, |a, b| a + b)
    }

    /// `|ψ(t)(n)|²` over the box.
    pub fn density(&self, t: T) -> Vec<T> {
        let (re, im) = self.prop.evolve(&self.coeffs, t);
        re.iter().zip(&im).map(|(&a, &b)| a * a + b * b).collect()
    }

    /// Total mass at `t` and the mass in the outer [`OUTER_FRACTION`] of sites.
    pub fn mass_profile(&self, t: T) -> (T, T) {
        let rho = self.density(t);
        let n = self.prop.half_width() as f64;
        let half = self.prop.half_width() as i64;
        let edge = ((1.0 - OUTER_FRACTION) * n).floor() as i64;
        let mut total = T::zero();
        let mut outer = T::zero();
        for (i, &r) in rho.iter().enumerate() {
            total += r;
            if (i as i64 - half).abs() > edge {
                outer += r;
            }
        }
        (total, outer)
    }
}

/// `⟨⟨|X|^p⟩⟩(T)` for a single `T`.
pub fn evolve_moment<T: Real>(h: &LatticeHamiltonian<T>, psi0: &[T], p: T, t: T) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::Precondition(format!("averaging time {t} must be positive")));
    }
    let prop = h.eigen()?;
    Ok(MomentEvaluator::new(&prop, psi0, p)?.moment(t))
}

/// Moments sampled over a grid of averaging times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentCurve<T> {
    pub p: T,
    pub box_half_width: usize,
    pub initial_state: String,
    /// `(T, ⟨⟨|X|^p⟩⟩(T))`
    pub samples: Vec<(T, T)>,
    /// Mass of `ψ(T)` in the outer sites, per sample.
    pub outer_mass: Vec<T>,
    /// Largest `|‖ψ(T)‖² − 1|` over the samples.
    pub unitarity_drift: T,
}

impl<T: Real> MomentCurve<T> {
    /// First sample time whose state has reached the box boundary.
    pub fn contaminated_from(&self) -> Option<T> {
        let limit = lit::<T>(REFLECTION_MASS);
        self.samples.iter().zip(&self.outer_mass).find(|(_, &m)| m > limit).map(|(s, _)| s.0)
    }

    /// Samples taken before the reflection guard trips.
    pub fn trusted(&self) -> Vec<(T, T)> {
        let limit = lit::<T>(REFLECTION_MASS);
        self.samples.iter().zip(&self.outer_mass).take_while(|(_, &m)| m <= limit).map(|(s, _)| *s).collect()
    }
}

pub fn moment_curve<T: Real>(
    prop: &Propagator<T>,
    psi0: &[T],
    p: T,
    times: &[T],
    initial_state: &str,
) -> Result<MomentCurve<T>> {
    let eval = MomentEvaluator::new(prop, psi0, p)?;
    let mut samples = Vec::with_capacity(times.len());
    let mut outer_mass = Vec::with_capacity(times.len());
    let mut drift = T::zero();
    for &t in times {
        if !(t > T::zero()) {
            return Err(Error::Precondition(format!("averaging time {t} must be positive")));
        }
        samples.push((t, eval.moment(t)));
        let (total, outer) = eval.mass_profile(t);
        drift = drift.max((total - T::one()).abs());
        outer_mass.push(outer);
    }
    Ok(MomentCurve {
        p,
        box_half_width: prop.half_width(),
        initial_state: initial_state.to_string(),
        samples,
        outer_mass,
        unitarity_drift: drift,
    })
}

/// Least-squares power law `⟨⟨|X|^p⟩⟩(T) ≈ C·T^β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit<T> {
    /// `β`
    pub exponent: T,
    /// `ln C`
    pub intercept: T,
    /// Root-mean-square residual in `ln ⟨⟨|X|^p⟩⟩`.
    pub residual_rms: T,
    pub samples: usize,
}

/// Minimum sampling demanded by [`fit_exponent`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitPolicy {
    pub min_samples: usize,
    pub min_decades: f64,
}

impl Default for FitPolicy {
    fn default() -> Self {
        Self { min_samples: 8, min_decades: 1.5 }
    }
}

/// Fit with the default policy: at least 8 samples over 1.5 decades.
pub fn transport_exponent<T: Real>(curve: &MomentCurve<T>) -> Result<ExponentFit<T>> {
    fit_exponent(curve, FitPolicy::default())
}

pub fn fit_exponent<T: Real>(curve: &MomentCurve<T>, policy: FitPolicy) -> Result<ExponentFit<T>> {
    if let Some(t) = curve.contaminated_from() {
        return Err(Error::Contaminated { first_t: t.to_f64().unwrap() });
    }
    let s = &curve.samples;
    if s.len() < policy.min_samples.max(2) {
        return Err(Error::Precondition(format!("{} samples given, at least {} needed", s.len(), policy.min_samples)));
    }
    let (tmin, tmax) = s.iter().fold((T::infinity(), T::zero()), |(a, b), &(t, _)| (a.min(t), b.max(t)));
    if !((tmax / tmin).log10() >= lit(policy.min_decades)) {
        return Err(Error::Precondition(format!(
            "times span [{tmin}, {tmax}], at least {} decades needed",
            policy.min_decades
        )));
    }
    if let Some(&(t, _)) = s.iter().find(|&&(_, m)| !(m > T::zero())) {
        return Err(Error::Precondition(format!("nonpositive moment at T = {t}")));
    }
    let pts: Vec<(T, T)> = s.iter().map(|&(t, m)| (t.ln(), m.ln())).collect();
    let n = from_usize::<T>(pts.len());
    let mx = pts.iter().fold(T::zero(), |a, p| a + p.0) / n;
    let my = pts.iter().fold(T::zero(), |a, p| a + p.1) / n;
    let sxy = pts.iter().fold(T::zero(), |a, p| a + (p.0 - mx) * (p.1 - my));
    let sxx = pts.iter().fold(T::zero(), |a, p| a + (p.0 - mx) * (p.0 - mx));
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss = pts.iter().fold(T::zero(), |a, p| {
        let r = p.1 - (intercept + slope * p.0);
        a + r * r
    });
    Ok(ExponentFit { exponent: slope, intercept, residual_rms: (ss / n).sqrt(), samples: pts.len() })
}

/// `δ_0` on the box of a Hamiltonian.
pub fn delta_origin<T: Real>(h: &LatticeHamiltonian<T>) -> Vec<T> {
    let mut psi = vec![T::zero(); h.dim()];
    psi[h.half_width()] = T::one();
    psi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::build_box;
    use crate::operator::Potential;

    fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64)).collect()
    }

    #[test]
    fn kernel_properties() {
        assert_eq!(kernel(0.0, 5.0), Complex::new(1.0, 0.0));
        for &w in &[1e-7, 0.3, 2.0, 17.0] {
            let k = kernel(w, 3.0f64);
            let km = kernel(-w, 3.0f64);
            assert!(k.norm() <= 1.0 + 1e-15);
            assert!((k.re - km.re).abs() < 1e-15 && (k.im + km.im).abs() < 1e-15);
        }
    }

    #[test]
    fn zeroth_moment_is_one() {
        let v = Potential::new(-30, (0..61).map(|i| ((i * 13) % 7) as f64 * 0.5).collect());
        let h = build_box(&v, 30).unwrap();
        let psi = delta_origin(&h);
        for t in [0.5, 3.0, 20.0] {
            assert!((evolve_moment(&h, &psi, 0.0, t).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(evolve_moment(&h, &vec![0.5; 61], 2.0, 1.0).is_err());
    }

    #[test]
    fn short_times_do_not_spread() {
        let h = build_box(&Potential::constant(0.0f64, -50..=50), 50).unwrap();
        let psi = delta_origin(&h);
        assert!(evolve_moment(&h, &psi, 2.0, 1e-6).unwrap().abs() <= 1e-6);
    }

    #[test]
    fn free_motion_is_ballistic() {
        // ⟨X²⟩(t) = 2t² exactly on ℤ, so the Cesàro mean is 2T²/3
        let h = build_box(&Potential::constant(0.0f64, -400..=400), 400).unwrap();
        let prop = h.eigen().unwrap();
        let psi = delta_origin(&h);
        let ts = log_grid(5.0, 160.0, 10);
        let curve = moment_curve(&prop, &psi, 2.0, &ts, "delta0").unwrap();
        for &(t, m) in &curve.samples {
            assert!((m / (2.0 * t * t / 3.0) - 1.0).abs() < 1e-6, "T = {t}: {m}");
        }
        assert!(curve.unitarity_drift < 1e-10);
        let fit = transport_exponent(&curve).unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-3);
        // a constant shift leaves the moments unchanged
        let hs = build_box(&Potential::constant(1.7f64, -400..=400), 400).unwrap();
        let ps = hs.eigen().unwrap();
        let shifted = moment_curve(&ps, &psi, 2.0, &ts, "delta0").unwrap();
        for (a, b) in curve.samples.iter().zip(&shifted.samples) {
            assert!((a.1 - b.1).abs() < 1e-8 * a.1);
        }
    }

    #[test]
    fn reflection_is_flagged() {
        let h = build_box(&Potential::constant(0.0f64, -60..=60), 60).unwrap();
        let prop = h.eigen().unwrap();
        let psi = delta_origin(&h);
        let ts = log_grid(1.0, 100.0, 10);
        let curve = moment_curve(&prop, &psi, 2.0, &ts, "delta0").unwrap();
        assert!(curve.contaminated_from().is_some());
        assert!(matches!(transport_exponent(&curve), Err(Error::Contaminated { .. })));
        let short = moment_curve(&prop, &psi, 2.0, &ts[..4], "delta0").unwrap();
        assert!(matches!(transport_exponent(&short), Err(Error::Precondition(_))));
    }

    #[test]
    fn jensen_between_orders() {
        let v = Potential::new(-80, (0..161).map(|i| if (i as f64 * 0.618).fract() > 0.382 { 2.0 } else { 0.0 }).collect());
        let h = build_box(&v, 80).unwrap();
        let prop = h.eigen().unwrap();
        let psi = delta_origin(&h);
        let m1 = MomentEvaluator::new(&prop, &psi, 1.0).unwrap();
        let m2 = MomentEvaluator::new(&prop, &psi, 2.0).unwrap();
        for t in [2.0f64, 10.0, 30.0] {
            assert!(m1.moment(t) <= m2.moment(t).sqrt() + 1e-12);
        }
    }
}
