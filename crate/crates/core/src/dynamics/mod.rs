//! Unitary evolution on a finite box, Cesàro-averaged position moments and
//! transport exponents.

pub mod hamiltonian;
pub mod moments;

pub use hamiltonian::{build_box, LatticeHamiltonian, Propagator};
pub use moments::{
    delta_origin, evolve_moment, fit_exponent, kernel, moment_curve, transport_exponent, ExponentFit, FitPolicy, MomentCurve, MomentEvaluator,
    OUTER_FRACTION, REFLECTION_MASS,
};
