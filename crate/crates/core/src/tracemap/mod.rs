//! Trace recursions for transfer matrices along hierarchical words, the
//! polynomial trace maps of two-letter substitutions, and energy
//! classification by trace escape.

pub mod model;
pub mod orbit;
pub mod reduce;

pub use model::{SturmianModel, SubstitutionModel, TraceModel};
pub use orbit::{
    c_lambda, classify_energy, fibonacci_orbit, fibonacci_step, sturmian_traces, Classification, TraceOrbit,
    ESCAPE_RUN, TRACE_CLAMP,
};
pub use reduce::{square_identity_check, trace_identity_check, trace_triple_step, TraceMap, TracePoly, TraceState2};
