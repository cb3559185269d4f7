//! The perturbation theory core: the functional `mu`, the obstruction
//! sequence, moment vectors and witness fields, `alpha` on periodic cycles,
//! and continuation of cycles under `R + lambda v`.

mod alpha;
mod continuation;
mod cycles;
mod field;
mod mu;
mod obstruction;

pub use alpha::{solve_alpha_on_cycle, CycleAlphaSolution};
pub use continuation::{
    continue_cycle, motion_velocity_check, ContinuationResult, StopReason, DEGENERACY_MARGIN,
    VELOCITY_STEP,
};
pub use cycles::{find_cycles, grid_seeds, Cycle, CycleStability, PARABOLIC_TOL};
pub(crate) use cycles::newton_periodic;
pub use field::{PerturbedMap, VectorFieldSpec, POLE_DISTANCE_FRACTION};
pub use mu::{
    find_witness_field, moment_vector, mu_constant_unicritical, mu_functional, MuResult,
    NONVANISHING_THRESHOLD, WITNESS_THRESHOLD,
};
pub use obstruction::{
    obstruction_product_sum, obstruction_sequence, BoundedEvidence, ObstructionSeries,
    GROWTH_MARGIN, MIN_FIT_SAMPLES,
};
