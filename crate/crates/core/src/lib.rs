//! Numerical toolkit for infinitesimal perturbations of rational maps.
//!
//! The crate follows the critical orbit of a map `R`, accumulates the
//! derivative cocycle `DR^k(R(c))` in overflow-safe arithmetic, and evaluates
//! the quantities built from it:
//!
//! * the summability series `sum 1/|DR^k(R(c))|`,
//! * the functional `mu(v) = sum v(R^k(c)) / DR^k(R(c))`,
//! * the obstruction sequence `DR^{n-1}(R(c)) * sum_{k<n} v(R^k(c)) / DR^k(R(c))`,
//! * the field `alpha` solving `v = alpha o R - DR * alpha` on periodic cycles,
//!   and the continuation of those cycles under `R + lambda v`.
//!
//! Parameter scans over the unicritical families `z^d + c` tie these together.

pub mod cli;
pub mod dynamics;
mod error;
pub mod numerics;
pub mod perturbation;
pub mod scan;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use dynamics::{
    classify_parameter, iterate_orbit, julia_sample, summability_report, OrbitRecord,
    ParameterClass, ParameterKind, Summability, SummabilityReport,
};
pub use perturbation::{
    continue_cycle, find_cycles, find_witness_field, moment_vector, motion_velocity_check,
    mu_constant_unicritical, mu_functional, obstruction_sequence, solve_alpha_on_cycle,
    BoundedEvidence, ContinuationResult, Cycle, CycleAlphaSolution, MuResult, ObstructionSeries,
    StopReason, VectorFieldSpec,
};
pub use numerics::{
    critical_points, eval_map, poly_roots, xc_add, xc_mul, MapSpec, Polynomial, XComplex,
};
pub use scan::{growth_heatmap, render_escape, scan_parameters, ScanClass, ScanConfig, ScanRow};

