//! Gordon-type criteria: local squares and cubes in the potential, the
//! solution lower bounds they imply, and frequency bounds for the
//! almost-sure versions.

pub mod criteria;
pub mod scan;

pub use criteria::{
    cayley_hamilton_residual, check_cube, check_square, sample_directions, three_block_bound, two_block_bound,
    BoundCheck, GordonCertificate, GordonKind, SAMPLED_DIRECTIONS,
};
pub use scan::{frequency_lower_bound, scan_gordon_scales, FrequencyBound, ScaleHit};
