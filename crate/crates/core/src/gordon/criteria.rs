use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{transfer, vec_norm, Mat2, Potential};
use crate::scalar::{lit, Real};

/// Number of sampled unit vectors besides the two basis vectors.
pub const SAMPLED_DIRECTIONS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GordonKind {
    TwoBlock,
    ThreeBlock,
}

/// A verified repetition at one scale together with the energies at which
/// the solution lower bound was checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GordonCertificate<T> {
    pub kind: GordonKind,
    pub scale: usize,
    pub trace_bound: Option<T>,
    pub offset: i64,
    /// `(E, attained lower bound)`
    pub verified_energies: Vec<(T, T)>,
}

/// Result of a single solution lower-bound check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck<T> {
    pub holds: bool,
    /// Smallest, over the sampled initial vectors, of the largest solution norm.
    pub attained: T,
    /// The bound the lemma guarantees.
    pub required: T,
}

/// `V(offset + j) = V(offset + j + n)` for `1 ≤ j ≤ n`.
pub fn check_square<T: Real>(v: &Potential<T>, n: usize, offset: i64) -> Result<bool> {
    let n = n as i64;
    v.require(offset + 1, offset + 2 * n)?;
    Ok((1..=n).all(|j| v.get(offset + j) == v.get(offset + j + n)))
}

/// `V(offset + j − n) = V(offset + j) = V(offset + j + n)` for `1 ≤ j ≤ n`.
pub fn check_cube<T: Real>(v: &Potential<T>, n: usize, offset: i64) -> Result<bool> {
    let n = n as i64;
    v.require(offset - n + 1, offset + 2 * n)?;
    Ok((1..=n).all(|j| {
        let mid = v.get(offset + j);
        v.get(offset + j - n) == mid && mid == v.get(offset + j + n)
    }))
}

/// Unit initial vectors: both basis vectors and [`SAMPLED_DIRECTIONS`]
/// directions at van der Corput angles in `[0, π)`.
pub fn sample_directions<T: Real>() -> Vec<[T; 2]> {
    let mut out = vec![[T::one(), T::zero()], [T::zero(), T::one()]];
    for k in 1..=SAMPLED_DIRECTIONS as u32 {
        let (mut x, mut f, mut i) = (0.0, 0.5, k);
        while i > 0 {
            x += f * (i & 1) as f64;
            i >>= 1;
            f *= 0.5;
        }
        let a = lit::<T>(x * std::f64::consts::PI);
        out.push([a.cos(), a.sin()]);
    }
    out
}

fn min_max_norm<T: Real>(mats: &[Mat2<T>]) -> T {
    sample_directions::<T>()
        .into_iter()
        .map(|u| mats.iter().map(|m| vec_norm(m.apply(u))).fold(T::zero(), T::max))
        .fold(T::infinity(), T::min)
}

/// Checks `max(‖Φ(n)‖, ‖Φ(2n)‖) ≥ ½·min(1, 1/|tr M_E(n)|) ≥ 1/(2C)` for the
/// sampled unit initial vectors, given a square `V(j) = V(j + n)` at the origin
/// and `|tr M_E(n)| ≤ C`.
pub fn two_block_bound<T: Real>(e: T, v: &Potential<T>, n: usize, c: T) -> Result<BoundCheck<T>> {
    if !(c >= T::one()) {
        return Err(Error::Certificate(format!("trace bound C = {c} must be at least 1")));
    }
    if !check_square(v, n, 0)? {
        return Err(Error::Certificate(format!("no square of length {n} at the origin")));
    }
    let m_n = transfer(e, v, n as i64)?;
    let t = m_n.trace().abs();
    if !(t <= c) {
        return Err(Error::Certificate(format!("|tr M(n)| = {t} exceeds C = {c}")));
    }
    let m_2n = transfer(e, v, 2 * n as i64)?;
    let attained = min_max_norm(&[m_n, m_2n]);
    let half = lit::<T>(0.5);
    let required = half / c;
    Ok(BoundCheck { holds: attained >= required, attained, required })
}

/// Checks `max(‖Φ(−n)‖, ‖Φ(n)‖, ‖Φ(2n)‖) ≥ ½` for the sampled unit initial
/// vectors, given a cube centred at the origin.
pub fn three_block_bound<T: Real>(e: T, v: &Potential<T>, n: usize) -> Result<BoundCheck<T>> {
    if !check_cube(v, n, 0)? {
        return Err(Error::Certificate(format!("no cube of length {n} centred at the origin")));
    }
    let n = n as i64;
    let mats = [transfer(e, v, -n)?, transfer(e, v, n)?, transfer(e, v, 2 * n)?];
    let attained = min_max_norm(&mats);
    let required = lit::<T>(0.5);
    Ok(BoundCheck { holds: attained >= required, attained, required })
}

/// `‖M(2n) − tr(M(n))·M(n) + I‖` together with `‖M(n)‖²`, for a potential
/// with a square at the origin.
pub fn cayley_hamilton_residual<T: Real>(e: T, v: &Potential<T>, n: usize) -> Result<(T, T)> {
    let m_n = transfer(e, v, n as i64)?;
    let m_2n = transfer(e, v, 2 * n as i64)?;
    let r = (m_2n - m_n.scale(m_n.trace()) + Mat2::identity()).norm();
    let s = m_n.norm();
    Ok((r, s * s))
}
