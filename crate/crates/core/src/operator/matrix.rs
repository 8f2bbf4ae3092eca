use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Num, Zero};

use crate::scalar::{lit, Real};

/// A real 2×2 matrix `[[a, b], [c, d]]`.
///
/// Arithmetic only needs a numeric ring, so exact scalars (rationals) work for
/// identity checks; norms require [`Real`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Copy + Num + Neg<Output = T>> Mat2<T> {
    pub const fn new(a: T, b: T, c: T, d: T) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn det(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> T {
        self.a + self.d
    }

    /// Adjugate; the inverse whenever `det = 1`.
    pub fn adjugate(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn apply(&self, v: [T; 2]) -> [T; 2] {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }

    /// `self^k` through the Cayley–Hamilton recursion `M^k = t·M^{k−1} − M^{k−2}`,
    /// valid for unimodular `M` with `t = tr M`.
    pub fn unimodular_power(&self, k: u64) -> Self {
        let t = self.trace();
        let mut prev = Self::identity();
        let mut cur = *self;
        if k == 0 {
            return prev;
        }
        for _ in 1..k {
            let next = cur.scale(t) - prev;
            prev = cur;
            cur = next;
        }
        cur
    }
}

impl<T: Real> Mat2<T> {
    pub fn max_abs(&self) -> T {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    pub fn frobenius(&self) -> T {
        let m = self.max_abs();
        if m.is_zero() {
            return m;
        }
        let s = self.scale(m.recip());
        m * (s.a * s.a + s.b * s.b + s.c * s.c + s.d * s.d).sqrt()
    }

    /// Operator (spectral) 2-norm, computed in closed form from the
    /// Frobenius norm and the determinant with overflow-safe scaling.
    pub fn norm(&self) -> T {
        let m = self.max_abs();
        if m.is_zero() || !m.is_finite() {
            return m;
        }
        let s = self.scale(m.recip());
        let f2 = s.a * s.a + s.b * s.b + s.c * s.c + s.d * s.d;
        let det = s.det();
        let disc = (f2 * f2 - lit::<T>(4.0) * det * det).max(T::zero());
        m * ((f2 + disc.sqrt()) * lit(0.5)).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }

    /// `|det − 1| ≤ tol · max(1, ‖M‖²)`.
    pub fn is_unimodular(&self, tol: T) -> bool {
        let n = self.norm();
        (self.det() - T::one()).abs() <= tol * (n * n).max(T::one())
    }
}

impl<T: Copy + Num> Mul for Mat2<T> {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

impl<T: Copy + Num> Add for Mat2<T> {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self { a: self.a + o.a, b: self.b + o.b, c: self.c + o.c, d: self.d + o.d }
    }
}

impl<T: Copy + Num> Sub for Mat2<T> {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        Self { a: self.a - o.a, b: self.b - o.b, c: self.c - o.c, d: self.d - o.d }
    }
}

impl<T: Copy + Num + Neg<Output = T>> Zero for Mat2<T> {
    fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }
}

/// Euclidean norm of a pair.
pub fn vec_norm<T: Real>(v: [T; 2]) -> T {
    v[0].hypot(v[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn norm_of_known_matrices() {
        let r: Mat2<f64> = Mat2::new(0.0, -1.0, 1.0, 0.0);
        assert!((r.norm() - 1.0).abs() < 1e-15);
        let m: Mat2<f64> = Mat2::new(3.0, 0.0, 0.0, 1.0 / 3.0);
        assert!((m.norm() - 3.0).abs() < 1e-14);
        let big: Mat2<f64> = Mat2::new(1e200, 1e200, 0.0, 1e-200);
        assert!((big.norm() / (2f64.sqrt() * 1e200) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn powers_match_repeated_products_exactly() {
        let m = Mat2::new(Rational64::new(3, 2), Rational64::from(-1), Rational64::from(1), Rational64::from(0));
        let mut direct = Mat2::identity();
        for k in 0..9u64 {
            assert_eq!(m.unimodular_power(k), direct);
            direct = direct * m;
        }
    }

    #[test]
    fn adjugate_inverts_unimodular() {
        let m: Mat2<f64> = Mat2::new(2.0, 3.0, 1.0, 2.0);
        let p = m * m.adjugate();
        assert_eq!(p, Mat2::identity());
        assert!(m.is_unimodular(1e-12));
        assert!(!Mat2::new(2.0, 0.0, 0.0, 2.0).is_unimodular(1e-12));
    }
}
