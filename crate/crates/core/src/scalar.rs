//! Floating-point scalar abstraction.
//!
//! Numerical modules are written once against [`Real`] and instantiated for
//! `f32` and `f64`. Eigenvalue problems and the one large matrix product in
//! the dynamics module go through faer.

use std::fmt::{Debug, Display};

use faer::col::{ColMut, ColRef};
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self, ComputeEigenvectors};
use faer::linalg::matmul::matmul;
use faer::traits::RealField;
use faer::{Accum, Mat, MatRef, Par, Side};
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar usable by every numerical routine in the crate.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Eigen-decomposition of the symmetric tridiagonal matrix with the given
    /// diagonal and off-diagonal. Returns ascending eigenvalues and the
    /// eigenvectors stored column-major (`vectors[k * n + i]` is component `i`
    /// of eigenvector `k`).
    fn sym_tridiagonal_eigen(diag: &[Self], off: &[Self]) -> Option<(Vec<Self>, Vec<Self>)>;

    /// Ascending eigenvalues of a symmetric tridiagonal matrix.
    fn sym_tridiagonal_eigenvalues(diag: &[Self], off: &[Self]) -> Option<Vec<Self>>;

    /// Ascending eigenvalues of a dense symmetric `n × n` matrix (column-major,
    /// upper triangle referenced).
    fn sym_dense_eigenvalues(a: &mut [Self], n: usize) -> Option<Vec<Self>>;

    /// `W = Zᵀ diag(weights) Z` for a column-major `n × n` matrix `Z`; only the
    /// the full symmetric result is returned.
    fn weighted_gram(z: &[Self], weights: &[Self], n: usize) -> Vec<Self>;
}

fn tridiagonal_evd<T: RealField + Copy>(diag: &[T], off: &[T], vectors: bool) -> Option<(Vec<T>, Vec<T>)> {
    let n = diag.len();
    if n == 0 {
        return Some((Vec::new(), Vec::new()));
    }
    assert_eq!(off.len() + 1, n, "off-diagonal must have n-1 entries");
    let mut e = off.to_vec();
    e.push(faer::traits::math_utils::zero::<T>());
    let mut s = diag.to_vec();
    let mut u = vectors.then(|| Mat::<T>::zeros(n, n));
    let params = Default::default();
    let need = if vectors { ComputeEigenvectors::Yes } else { ComputeEigenvectors::No };
    let mut buf = MemBuffer::new(evd::self_adjoint_evd_scratch::<T>(n, need, Par::Seq, params));
    evd::tridiagonal_self_adjoint_evd(
        ColRef::from_slice(diag).as_diagonal(),
        ColRef::from_slice(&e).as_diagonal(),
        ColMut::from_slice_mut(&mut s).as_diagonal_mut(),
        u.as_mut().map(|u| u.as_mut()),
        Par::Seq,
        MemStack::new(&mut buf),
        params,
    )
    .ok()?;
    let z = match u {
        Some(u) => (0..n).flat_map(|k| u.col(k).iter().copied().collect::<Vec<_>>()).collect(),
        None => Vec::new(),
    };
    Some((s, z))
}

fn dense_eigenvalues<T: RealField + Copy>(a: &[T], n: usize) -> Option<Vec<T>> {
    if n == 0 {
        return Some(Vec::new());
    }
    assert_eq!(a.len(), n * n);
    let m = MatRef::from_column_major_slice(a, n, n);
    m.self_adjoint_eigenvalues(Side::Upper).ok()
}

fn gram<T: RealField + Copy>(z: &[T], roots: &[T], n: usize) -> Vec<T> {
    // A = diag(sqrt(w)) Z, W = AᵀA
    let mut a = Mat::<T>::zeros(n, n);
    for k in 0..n {
        for i in 0..n {
            a[(i, k)] = z[k * n + i] * roots[i];
        }
    }
    let mut w = Mat::<T>::zeros(n, n);
    matmul(w.as_mut(), Accum::Replace, a.transpose(), a.as_ref(), T::one_impl(), Par::Seq);
    (0..n).flat_map(|k| w.col(k).iter().copied().collect::<Vec<_>>()).collect()
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            fn sym_tridiagonal_eigen(diag: &[Self], off: &[Self]) -> Option<(Vec<Self>, Vec<Self>)> {
                tridiagonal_evd(diag, off, true)
            }

            fn sym_tridiagonal_eigenvalues(diag: &[Self], off: &[Self]) -> Option<Vec<Self>> {
                tridiagonal_evd(diag, off, false).map(|(s, _)| s)
            }

            fn sym_dense_eigenvalues(a: &mut [Self], n: usize) -> Option<Vec<Self>> {
                dense_eigenvalues(a, n)
            }

            fn weighted_gram(z: &[Self], weights: &[Self], n: usize) -> Vec<Self> {
                let roots: Vec<Self> = weights.iter().map(|w| w.sqrt()).collect();
                gram(z, &roots, n)
            }
        }
    };
}

impl_real!(f64);
impl_real!(f32);

/// Converts an `f64` literal into any [`Real`].
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable")
}

/// Converts an integer count into any [`Real`].
#[inline]
pub fn from_usize<T: Real>(x: usize) -> T {
    T::from_usize(x).expect("count representable")
}
