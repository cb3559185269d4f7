use serde::{Deserialize, Serialize};

use super::mu::truncated_sum;
use super::VectorFieldSpec;
use crate::dynamics::OrbitRecord;
use crate::numerics::{eval_map, XComplex};
use crate::{Error, Result};

/// Slopes of `ln|b_n|` within this margin of zero are not decisive.
pub const GROWTH_MARGIN: f64 = 0.01;
/// Minimum number of trailing samples in the growth fit.
pub const MIN_FIT_SAMPLES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundedEvidence {
    Bounded,
    Unbounded,
    Inconclusive,
}

impl BoundedEvidence {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundedEvidence::Bounded => "bounded",
            BoundedEvidence::Unbounded => "unbounded",
            BoundedEvidence::Inconclusive => "inconclusive",
        }
    }
}

/// `b_n = DR^{n-1}(R(c)) * sum_{k<n} v(R^k(c)) / DR^k(R(c))` for
/// `n = 0..=N`, with `b_0 = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionSeries {
    pub b: Vec<XComplex>,
    /// Least-squares slope of `ln|b_n|` over the trailing half; `None` when
    /// fewer than two nonzero samples exist.
    pub growth_exponent: Option<f64>,
    pub bounded_evidence: BoundedEvidence,
}

/// Builds the obstruction sequence through `b_n` by the forward recurrence
/// `b_{k+1} = DR(R^k(c)) b_k + v(R^k(c))`.
///
/// The displayed product-times-sum form multiplies a huge cocycle by a
/// nearly cancelled sum; the recurrence avoids that and is exact up to one
/// rounding per step. [`obstruction_product_sum`] keeps the direct form for
/// cross-checks.
pub fn obstruction_sequence(orbit: &OrbitRecord, v: &VectorFieldSpec, n: usize) -> Result<ObstructionSeries> {
    if let Some(index) = orbit.critical_relation {
        return Err(Error::InvalidOrbit(format!("critical relation at index {index}")));
    }
    if n > orbit.terms() {
        return Err(Error::InvalidOrbit(format!("orbit has {} terms, {n} requested", orbit.terms())));
    }
    v.check_poles_against(&orbit.points[..n.max(1)])?;
    let mut b = Vec::with_capacity(n + 1);
    b.push(XComplex::ZERO);
    for k in 0..n {
        let z = orbit.points[k];
        let (_, dz) = eval_map(&orbit.map, z)?;
        let next = XComplex::try_from_complex(dz)?
            .checked_mul(&b[k])?
            .checked_add(&XComplex::try_from_complex(v.value(z)?)?)?;
        b.push(next);
    }
    let growth_exponent = fit_growth(&b);
    let bounded_evidence = classify_growth(&b, growth_exponent);
    Ok(ObstructionSeries { b, growth_exponent, bounded_evidence })
}

/// `b_n` evaluated literally as `cocycle[n-1] * sum_{k<n} v_k / cocycle[k]`.
pub fn obstruction_product_sum(orbit: &OrbitRecord, v: &VectorFieldSpec, n: usize) -> Result<XComplex> {
    if n == 0 {
        return Ok(XComplex::ZERO);
    }
    if n > orbit.terms() {
        return Err(Error::InvalidOrbit(format!("orbit has {} terms, {n} requested", orbit.terms())));
    }
    orbit.cocycle[n - 1].checked_mul(&truncated_sum(orbit, v, n)?)
}

fn fit_window(len: usize) -> std::ops::Range<usize> {
    // indices 1..len of b; the trailing half, but at least MIN_FIT_SAMPLES
    let last = len;
    let half_start = 1 + (len - 1) / 2;
    let start = half_start.min(last.saturating_sub(MIN_FIT_SAMPLES)).max(1);
    start..last
}

/// Slope of the least-squares line through `(k, ln|b_k|)`.
fn fit_growth(b: &[XComplex]) -> Option<f64> {
    let samples: Vec<(f64, f64)> = fit_window(b.len())
        .filter(|&k| !b[k].is_zero())
        .map(|k| (k as f64, b[k].ln_abs()))
        .collect();
    if samples.len() < 2 {
        return None;
    }
    let n = samples.len() as f64;
    let mean_x = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let mean_y = samples.iter().map(|s| s.1).sum::<f64>() / n;
    let sxy: f64 = samples.iter().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let sxx: f64 = samples.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
    Some(sxy / sxx)
}

fn classify_growth(b: &[XComplex], slope: Option<f64>) -> BoundedEvidence {
    let Some(slope) = slope else {
        return if b.iter().all(|x| x.is_zero()) { BoundedEvidence::Bounded } else { BoundedEvidence::Inconclusive };
    };
    if slope > GROWTH_MARGIN {
        return BoundedEvidence::Unbounded;
    }
    if slope < -GROWTH_MARGIN {
        return BoundedEvidence::Bounded;
    }
    // flat fit: bounded only if the trailing values also stay within a
    // narrow band
    let logs: Vec<f64> = fit_window(b.len()).filter(|&k| !b[k].is_zero()).map(|k| b[k].ln_abs()).collect();
    let spread = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - logs.iter().cloned().fold(f64::INFINITY, f64::min);
    if spread < 1.0 {
        BoundedEvidence::Bounded
    } else {
        BoundedEvidence::Inconclusive
    }
}
