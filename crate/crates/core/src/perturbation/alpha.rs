use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cycles::{Cycle, PARABOLIC_TOL};
use super::VectorFieldSpec;
use crate::numerics::{HolomorphicMap, MapSpec};
use crate::{Error, Result};

/// `alpha` on a cycle with the per-point residuals of
/// `v(p_i) = alpha(p_{i+1}) - DR(p_i) alpha(p_i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleAlphaSolution {
    pub alpha: Vec<Complex64>,
    pub residuals: Vec<f64>,
}

impl CycleAlphaSolution {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

/// Solves `v = alpha o R - DR alpha` restricted to `cycle`.
///
/// Going once around the cycle gives `alpha(p_0) (1 - rho) = sum_k v(p_k)
/// DR^{n-1-k}(p_{k+1})`. Each point's value is taken from that closed form
/// started at the point itself, so no error is amplified by propagation.
pub fn solve_alpha_on_cycle(map: &MapSpec, cycle: &Cycle, v: &VectorFieldSpec) -> Result<CycleAlphaSolution> {
    solve_alpha_in(map, cycle, v)
}

pub(crate) fn solve_alpha_in<M: HolomorphicMap + ?Sized>(
    map: &M,
    cycle: &Cycle,
    v: &VectorFieldSpec,
) -> Result<CycleAlphaSolution> {
    let n = cycle.points.len();
    if n == 0 {
        return Err(Error::InvalidCycle("cycle has no points".into()));
    }
    let mut derivs = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for &p in &cycle.points {
        derivs.push(map.eval(p)?.1);
        values.push(v.value(p)?);
    }
    let rho: Complex64 = derivs.iter().product();
    let gap = (Complex64::new(1.0, 0.0) - rho).norm();
    if gap <= PARABOLIC_TOL {
        return Err(Error::ParabolicCycle { gap });
    }

    let alpha: Vec<Complex64> = (0..n)
        .map(|i| {
            // acc = sum_k v(p_{i+k}) prod_{j=k+1}^{n-1} DR(p_{i+j})
            let mut acc = Complex64::new(0.0, 0.0);
            let mut rho_i = Complex64::new(1.0, 0.0);
            for k in 0..n {
                let idx = (i + k) % n;
                acc = acc * derivs[idx] + values[idx];
                rho_i *= derivs[idx];
            }
            acc / (1.0 - rho_i)
        })
        .collect();

    let residuals = (0..n)
        .map(|i| (values[i] - (alpha[(i + 1) % n] - derivs[i] * alpha[i])).norm())
        .collect();
    Ok(CycleAlphaSolution { alpha, residuals })
}
