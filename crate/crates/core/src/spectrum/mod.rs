//! Band sets of periodic approximants and nested approximations of the
//! spectrum.

pub mod bands;
pub mod intervals;

pub use bands::{
    approx_bands, band_measure, model_bands, model_nested_spectrum, nested_spectrum, spectrum_bounds, BandList,
    NestedSpectrum,
};
pub use intervals::IntervalSet;
