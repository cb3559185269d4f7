//! Critical orbits, summability evidence, parameter classification and
//! Julia-set sampling.

mod classify;
mod julia;
mod orbit;

pub use classify::{classify_parameter, ParameterClass, ParameterKind, CYCLE_DETECT_TOL};
pub use julia::julia_sample;
pub use orbit::{
    default_escape_radius, iterate_orbit, summability_report, trace_orbit, OrbitRecord,
    Summability, SummabilityReport, CAUCHY_TOL, NEAR_RELATION_TOL, RELATION_TOL,
    SUMMABILITY_MARGIN,
};
