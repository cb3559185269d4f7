//! Continuation of repelling cycles along `lambda -> R + lambda v`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::alpha::solve_alpha_in;
use super::cycles::{newton_periodic, Cycle};
use super::field::PerturbedMap;
use super::VectorFieldSpec;
use crate::numerics::MapSpec;
use crate::{Error, Result};

/// Continuation stops once `|rho|` drops to `1 + DEGENERACY_MARGIN`.
pub const DEGENERACY_MARGIN: f64 = 1e-3;
/// Step used for the finite-difference velocity at `lambda = 0`.
pub const VELOCITY_STEP: f64 = 1e-5;
const MAX_HALVINGS: u32 = 40;
const CORRECTOR_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    ReachedTarget,
    MultiplierDegenerate,
    NewtonFailure,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::ReachedTarget => "reached-target",
            StopReason::MultiplierDegenerate => "multiplier-degenerate",
            StopReason::NewtonFailure => "newton-failure",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuationResult {
    pub lambda_path: Vec<Complex64>,
    /// The continued cycle at each `lambda`, base point first.
    pub cycles: Vec<Cycle>,
    /// Central-difference `d p / d lambda` of the base point at 0.
    pub velocity_at_zero: Complex64,
    pub stopped_reason: StopReason,
    /// Largest allowed move of the base point in one accepted step.
    pub step_bound: f64,
}

impl ContinuationResult {
    pub fn final_cycle(&self) -> &Cycle {
        self.cycles.last().expect("continuation always records the starting cycle")
    }

    pub fn final_lambda(&self) -> Complex64 {
        *self.lambda_path.last().expect("continuation always records lambda = 0")
    }
}

/// Follows `cycle` from `lambda = 0` to `lambda_target` in `steps` nominal
/// steps.
///
/// Each step predicts the new base point with the exact velocity `alpha`
/// from [`solve_alpha_on_cycle`](super::solve_alpha_on_cycle) and corrects
/// it by Newton's method on `(R + lambda v)^n(z) - z`. A step whose
/// corrector fails or moves the point further than the step bound is
/// halved; the path stops when the cycle stops being repelling.
pub fn continue_cycle(
    map: &MapSpec,
    v: &VectorFieldSpec,
    cycle: &Cycle,
    lambda_target: Complex64,
    steps: usize,
) -> Result<ContinuationResult> {
    let period = cycle.period;
    let zero = Complex64::new(0.0, 0.0);
    let base_map = PerturbedMap { map, field: v, lambda: zero };
    let p0 = newton_periodic(&base_map, cycle.base_point(), period)
        .filter(|p| (p - cycle.base_point()).norm() <= 1e-6 * 1f64.max(p.norm()))
        .ok_or_else(|| Error::InvalidCycle("Newton's method fails at lambda = 0".into()))?;
    let start = Cycle::from_point(&base_map, p0, period)?;
    if start.multiplier.norm() <= 1.0 {
        return Err(Error::InvalidCycle(format!("cycle is not repelling (|rho| = {})", start.multiplier.norm())));
    }
    let step_bound = step_bound_for(&start);

    let direction = if lambda_target.norm() > 0.0 { lambda_target / lambda_target.norm() } else { Complex64::new(1.0, 0.0) };
    let velocity_at_zero = fd_velocity(map, v, &start, direction)?;

    let mut result = ContinuationResult {
        lambda_path: vec![zero],
        cycles: vec![cycle.clone()],
        velocity_at_zero,
        stopped_reason: StopReason::ReachedTarget,
        step_bound,
    };
    if lambda_target == zero {
        return Ok(result);
    }

    let nominal = 1.0 / steps.max(1) as f64;
    let mut t = 0.0f64;
    let mut dt = nominal;
    let mut current = start;
    while t < 1.0 {
        let next_t = (t + dt).min(1.0);
        let lambda = lambda_target * t;
        let next_lambda = lambda_target * next_t;
        let here = PerturbedMap { map, field: v, lambda };
        let alpha = match solve_alpha_in(&here, &current, v) {
            Ok(sol) => sol.alpha[0],
            Err(Error::ParabolicCycle { .. }) => {
                result.stopped_reason = StopReason::MultiplierDegenerate;
                return Ok(result);
            }
            Err(e) => return Err(e),
        };
        let predicted = current.base_point() + (next_lambda - lambda) * alpha;
        let there = PerturbedMap { map, field: v, lambda: next_lambda };
        let accepted = newton_periodic(&there, predicted, period)
            .filter(|p| (p - current.base_point()).norm() <= step_bound)
            .and_then(|p| Cycle::from_point(&there, p, period).ok())
            .filter(|c| c.residual <= CORRECTOR_TOL * 1f64.max(c.base_point().norm()));
        match accepted {
            Some(next) => {
                if next.multiplier.norm() <= 1.0 + DEGENERACY_MARGIN {
                    result.stopped_reason = StopReason::MultiplierDegenerate;
                    return Ok(result);
                }
                t = next_t;
                result.lambda_path.push(if t >= 1.0 { lambda_target } else { next_lambda });
                result.cycles.push(next.clone());
                current = next;
                dt = (dt * 2.0).min(nominal);
            }
            None => {
                dt *= 0.5;
                if dt < nominal * 0.5f64.powi(MAX_HALVINGS as i32) {
                    result.stopped_reason = StopReason::NewtonFailure;
                    return Ok(result);
                }
            }
        }
    }
    Ok(result)
}

/// A quarter of the smallest gap between cycle points, capped at `0.1 max(1, |p|)`.
fn step_bound_for(cycle: &Cycle) -> f64 {
    let mut bound = 0.1 * 1f64.max(cycle.base_point().norm());
    for i in 0..cycle.points.len() {
        for j in i + 1..cycle.points.len() {
            bound = bound.min(0.25 * (cycle.points[i] - cycle.points[j]).norm());
        }
    }
    bound
}

fn fd_velocity(map: &MapSpec, v: &VectorFieldSpec, start: &Cycle, direction: Complex64) -> Result<Complex64> {
    let here = PerturbedMap { map, field: v, lambda: Complex64::new(0.0, 0.0) };
    let alpha = match solve_alpha_in(&here, start, v) {
        Ok(sol) => sol.alpha[0],
        Err(Error::ParabolicCycle { .. }) => Complex64::new(0.0, 0.0),
        Err(e) => return Err(e),
    };
    let h = direction * VELOCITY_STEP;
    let mut ends = [Complex64::new(0.0, 0.0); 2];
    for (slot, sign) in ends.iter_mut().zip([1.0, -1.0]) {
        let lambda = h * sign;
        let fam = PerturbedMap { map, field: v, lambda };
        *slot = newton_periodic(&fam, start.base_point() + lambda * alpha, start.period)
            .ok_or_else(|| Error::InvalidCycle("Newton's method fails near lambda = 0".into()))?;
    }
    Ok((ends[0] - ends[1]) / (2.0 * h))
}

/// Compares `alpha` at the base point with the central difference
/// `(p(h) - p(-h)) / 2h` of the continued base point.
///
/// Returns `(alpha, fd_velocity, |alpha - fd_velocity|)`.
pub fn motion_velocity_check(
    map: &MapSpec,
    v: &VectorFieldSpec,
    cycle: &Cycle,
    h: f64,
) -> Result<(Complex64, Complex64, f64)> {
    if h <= 0.0 {
        return Err(Error::InvalidInput("finite-difference step must be positive".into()));
    }
    let base = PerturbedMap { map, field: v, lambda: Complex64::new(0.0, 0.0) };
    let alpha = solve_alpha_in(&base, cycle, v)?.alpha[0];
    let mut ends = [Complex64::new(0.0, 0.0); 2];
    for (slot, sign) in ends.iter_mut().zip([1.0, -1.0]) {
        let run = continue_cycle(map, v, cycle, Complex64::new(sign * h, 0.0), 4)?;
        if run.stopped_reason != StopReason::ReachedTarget {
            return Err(Error::InvalidCycle(format!("continuation to {} stopped: {}", sign * h, run.stopped_reason.as_str())));
        }
        *slot = run.final_cycle().base_point();
    }
    let fd = (ends[0] - ends[1]) / (2.0 * h);
    Ok((alpha, fd, (alpha - fd).norm()))
}
