use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::Potential;
use crate::scalar::Real;

/// `(Hφ)(n) = φ(n+1) + φ(n−1) + V(n)φ(n)` on the sites `−N..=N` with
/// Dirichlet boundary conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeHamiltonian<T> {
    half_width: usize,
    diagonal: Vec<T>,
}

/// Restricts `V` to the box `−N..=N`.
pub fn build_box<T: Real>(v: &Potential<T>, n: usize) -> Result<LatticeHamiltonian<T>> {
    let n_i = n as i64;
    v.require(-n_i, n_i)?;
    let diagonal = (-n_i..=n_i).map(|s| v.at(s)).collect::<Result<_>>()?;
    Ok(LatticeHamiltonian { half_width: n, diagonal })
}

impl<T: Real> LatticeHamiltonian<T> {
    /// `N`; the box has `2N + 1` sites.
    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[T] {
        &self.diagonal
    }

    /// Site label of row `i`.
    pub fn site(&self, i: usize) -> i64 {
        i as i64 - self.half_width as i64
    }

    /// Matrix entry for rows/columns indexed `0..dim`.
    pub fn entry(&self, i: usize, j: usize) -> T {
        if i == j {
            self.diagonal[i]
        } else if i.abs_diff(j) == 1 {
            T::one()
        } else {
            T::zero()
        }
    }

    pub fn eigen(&self) -> Result<Propagator<T>> {
        Propagator::new(self)
    }
}

/// Full eigendecomposition `H = Σ_k E_k v_k v_kᵀ`.
#[derive(Debug, Clone)]
pub struct Propagator<T> {
    half_width: usize,
    values: Vec<T>,
    /// Column-major: `vectors[k * dim + i]` is `v_k(i)`.
    vectors: Vec<T>,
}

impl<T: Real> Propagator<T> {
    pub fn new(h: &LatticeHamiltonian<T>) -> Result<Self> {
        let off = vec![T::one(); h.dim().saturating_sub(1)];
        let (values, vectors) = T::sym_tridiagonal_eigen(&h.diagonal, &off)
            .ok_or_else(|| Error::Backend("tridiagonal eigensolver did not converge".into()))?;
        Ok(Self { half_width: h.half_width, values, vectors })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.values
    }

    pub fn eigenvector(&self, k: usize) -> &[T] {
        let d = self.dim();
        &self.vectors[k * d..(k + 1) * d]
    }

    pub(crate) fn vectors(&self) -> &[T] {
        &self.vectors
    }

    /// `c_k = ⟨v_k, ψ⟩`.
    pub fn coefficients(&self, psi: &[T]) -> Vec<T> {
        (0..self.dim())
            .map(|k| self.eigenvector(k).iter().zip(psi).fold(T::zero(), |acc, (&v, &p)| acc + v * p))
            .collect()
    }

    /// `ψ(t) = Σ_k c_k e^{−iE_k t} v_k` as (real, imaginary) parts.
    pub fn evolve(&self, coeffs: &[T], t: T) -> (Vec<T>, Vec<T>) {
        let d = self.dim();
        let mut re = vec![T::zero(); d];
        let mut im = vec![T::zero(); d];
        for (k, &c) in coeffs.iter().enumerate() {
            if c == T::zero() {
                continue;
            }
            let phase = self.values[k] * t;
            let (a, b) = (c * phase.cos(), -c * phase.sin());
            for (i, &v) in self.eigenvector(k).iter().enumerate() {
                re[i] += a * v;
                im[i] += b * v;
            }
        }
        (re, im)
    }
}
