//! Potentials, transfer matrices and solutions of the eigenvalue equation
//! `φ(n+1) + φ(n−1) + V(n)φ(n) = Eφ(n)`.

pub mod matrix;
pub mod potential;
pub mod transfer;

pub use matrix::{vec_norm, Mat2};
pub use potential::{Coding, Potential};
pub use transfer::{
    canonical_pair, elementary_matrix, jl_ratio, lyapunov_estimate, renormalized_transfer, solve, transfer,
    truncated_norm, word_matrix, RenormalizedProduct, SolutionVector,
};
