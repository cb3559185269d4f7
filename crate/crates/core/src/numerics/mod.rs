//! Overflow-safe complex arithmetic, polynomial and rational maps, and
//! polynomial root finding.

mod map;
mod poly;
mod roots;
mod xcomplex;

pub use map::{
    critical_points, critical_points_with_multiplicity, eval_map, HolomorphicMap, MapForm,
    MapSpec, CRITICAL_RESIDUAL_TOL, POLE_TOL,
};
pub use poly::Polynomial;
pub use roots::{cluster_roots, poly_roots, CLUSTER_TOL};
pub use xcomplex::{xc_add, xc_mul, XComplex, MANTISSA_BITS};
