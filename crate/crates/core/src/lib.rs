// `!(x >= y)` is used on purpose so that NaN inputs are rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod gordon;
pub mod operator;
pub mod scalar;
pub mod spectrum;
pub mod symbolic;
pub mod tracemap;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` instances of the generic types.
pub type Matrix = operator::Mat2<f64>;
pub type Potential = operator::Potential<f64>;
pub type Coding = operator::Coding<f64>;
pub type TraceOrbit = tracemap::TraceOrbit<f64>;
pub type SturmianModel = tracemap::SturmianModel<f64>;
pub type SubstitutionModel = tracemap::SubstitutionModel<f64>;
pub type BandList = spectrum::BandList<f64>;
pub type NestedSpectrum = spectrum::NestedSpectrum<f64>;
pub type IntervalSet = spectrum::IntervalSet<f64>;
pub type GordonCertificate = gordon::GordonCertificate<f64>;
pub type LatticeHamiltonian = dynamics::LatticeHamiltonian<f64>;
pub type Propagator = dynamics::Propagator<f64>;
pub type MomentCurve = dynamics::MomentCurve<f64>;
pub type ExponentFit = dynamics::ExponentFit<f64>;
