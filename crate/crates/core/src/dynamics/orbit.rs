use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numerics::{eval_map, MapSpec, XComplex, CLUSTER_TOL};
use crate::{Error, Result};

/// An orbit point closer than this (times the local scale) to a critical
/// point is a critical relation.
pub const RELATION_TOL: f64 = 1e-12;
/// Closer than this produces a warning only.
pub const NEAR_RELATION_TOL: f64 = 1e-6;
/// Tail ratios within `1 +/- SUMMABILITY_MARGIN` are inconclusive.
pub const SUMMABILITY_MARGIN: f64 = 0.05;
/// Relative change of the partial sum over the last window below which the
/// series counts as stabilized.
pub const CAUCHY_TOL: f64 = 1e-6;

/// The critical orbit `c, R(c), R^2(c), ...` with its derivative cocycle.
///
/// `cocycle[k] = DR^k(R(c))`, the derivative of `R^k` at the critical value,
/// so `cocycle[k + 1] = cocycle[k] * DR(points[k + 1])` and `cocycle[0] = 1`.
/// Points are indexed from the critical point itself. Series over the orbit
/// use the terms `k < truncated_at`; the final point is kept so the next
/// cocycle factor is always available.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub map: MapSpec,
    pub critical_point: Complex64,
    /// The critical value `R(c)`.
    pub start: Complex64,
    pub points: Vec<Complex64>,
    pub cocycle: Vec<XComplex>,
    /// `sum_{j <= k} 1 / |cocycle[j]|`
    pub partial_sums_abs: Vec<f64>,
    pub escaped_at: Option<usize>,
    pub truncated_at: usize,
    pub escape_radius: f64,
    /// Index at which the orbit landed on a critical point.
    pub critical_relation: Option<usize>,
    pub warnings: Vec<String>,
}

impl OrbitRecord {
    /// Number of series terms available (`k < truncated_at`).
    pub fn terms(&self) -> usize {
        self.truncated_at
    }

    pub fn is_finished(&self) -> bool {
        self.escaped_at.is_some() || self.critical_relation.is_some()
    }

    /// Continues the orbit until `n_max` iterations, escape, or a relation.
    pub fn extend_to(&mut self, n_max: usize) -> Result<()> {
        if self.is_finished() {
            return Ok(());
        }
        let crit = self.map.critical_points().to_vec();
        let mut k = self.points.len() - 1;
        while k < n_max {
            let (z, _) = eval_map(&self.map, self.points[k])?;
            k += 1;
            self.points.push(z);
            let finite = z.re.is_finite() && z.im.is_finite();
            let factor = if finite {
                eval_map(&self.map, z).ok().and_then(|(_, dz)| XComplex::try_from_complex(dz).ok())
            } else {
                None
            };
            let next = match factor {
                Some(f) => self.cocycle[k - 1].checked_mul(&f)?,
                // an overflowed escape point has no usable derivative
                None => self.cocycle[k - 1],
            };
            self.cocycle.push(next);
            let inv = if next.is_zero() { f64::INFINITY } else { (-next.log2_abs()).exp2() };
            self.partial_sums_abs.push(self.partial_sums_abs[k - 1] + inv);
            self.truncated_at = k;
            if !finite || z.norm() > self.escape_radius {
                self.escaped_at = Some(k);
                return Ok(());
            }

            for &cp in &crit {
                let dist = (z - cp).norm();
                let scale = 1f64.max(cp.norm());
                if dist <= RELATION_TOL * scale {
                    self.critical_relation = Some(k);
                    return Ok(());
                }
                if dist <= NEAR_RELATION_TOL * scale {
                    self.warnings.push(format!("near critical relation at index {k} (distance {dist:e})"));
                }
            }
        }
        Ok(())
    }

    fn require_clean(&self) -> Result<()> {
        if let Some(index) = self.critical_relation {
            return Err(Error::InvalidOrbit(format!("critical relation at index {index}")));
        }
        Ok(())
    }
}

/// Default escape radius for `z^d + c`.
pub fn default_escape_radius(c: Complex64, d: u32) -> f64 {
    2f64.max(c.norm().powf(1.0 / (d as f64 - 1.0))) + 1.0
}

/// Iterates the critical orbit of `c`, recording the cocycle and the
/// summability partial sums.
///
/// Fails with [`Error::CriticalRelation`] when the orbit returns to a
/// critical point; [`trace_orbit`] returns the marked record instead.
pub fn iterate_orbit(map: &MapSpec, c: Complex64, n_max: usize, escape_radius: f64) -> Result<OrbitRecord> {
    let orbit = trace_orbit(map, c, n_max, escape_radius)?;
    if let Some(index) = orbit.critical_relation {
        return Err(Error::CriticalRelation { index, critical_point: orbit.points[index] });
    }
    Ok(orbit)
}

/// As [`iterate_orbit`], but a critical relation is recorded in the returned
/// record rather than reported as an error.
pub fn trace_orbit(map: &MapSpec, c: Complex64, n_max: usize, escape_radius: f64) -> Result<OrbitRecord> {
    if n_max < 1 {
        return Err(Error::InvalidInput("n_max must be >= 1".into()));
    }
    let is_listed = map
        .critical_points()
        .iter()
        .any(|cp| (cp - c).norm() <= CLUSTER_TOL * 1f64.max(cp.norm()));
    if !is_listed {
        let (_, dc) = eval_map(map, c)?;
        if dc.norm() > crate::numerics::CRITICAL_RESIDUAL_TOL {
            return Err(Error::InvalidInput(format!("{c} is not a critical point (|DR| = {:e})", dc.norm())));
        }
    }
    let mut orbit = OrbitRecord {
        map: map.clone(),
        critical_point: c,
        start: eval_map(map, c)?.0,
        points: vec![c],
        cocycle: vec![XComplex::ONE],
        partial_sums_abs: vec![1.0],
        escaped_at: None,
        truncated_at: 0,
        escape_radius,
        critical_relation: None,
        warnings: Vec::new(),
    };
    orbit.extend_to(n_max)?;
    Ok(orbit)
}

/// Evidence about `sum 1/|DR^k(R(c))|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Summability {
    SummableEvidence,
    DivergentEvidence,
    Inconclusive,
}

impl Summability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Summability::SummableEvidence => "summable-evidence",
            Summability::DivergentEvidence => "divergent-evidence",
            Summability::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummabilityReport {
    /// `S_N`, the partial sum through the last orbit point.
    pub partial_sum: f64,
    /// Geometric mean of `|cocycle[k]| / |cocycle[k+1]|` over the last window.
    pub tail_ratio: f64,
    pub classification: Summability,
    pub window: usize,
    pub terms: usize,
}

/// Classifies the summability evidence of an orbit from its last `window`
/// cocycle ratios and the stabilization of the partial sums.
pub fn summability_report(orbit: &OrbitRecord, window: usize) -> Result<SummabilityReport> {
    orbit.require_clean()?;
    let len = orbit.points.len();
    if window == 0 || len < 2 * window {
        return Err(Error::InvalidOrbit(format!(
            "summability window {window} needs at least {} orbit entries, have {len}",
            2 * window
        )));
    }
    let last = len - 1;
    let log_ratio =
        (orbit.cocycle[last - window].ln_abs() - orbit.cocycle[last].ln_abs()) / window as f64;
    let tail_ratio = log_ratio.exp();

    let s = &orbit.partial_sums_abs;
    let partial_sum = s[last];
    let recent = s[last] - s[last - window];
    let superlinear = match last.checked_sub(2 * window) {
        Some(first) => {
            let earlier = s[last - window] - s[first];
            recent > 1.0 && recent > (1.0 + SUMMABILITY_MARGIN) * earlier
        }
        None => false,
    };
    let stabilized = recent <= CAUCHY_TOL * partial_sum.max(1.0);

    let classification = if !partial_sum.is_finite() || tail_ratio > 1.0 + SUMMABILITY_MARGIN || superlinear {
        Summability::DivergentEvidence
    } else if tail_ratio < 1.0 - SUMMABILITY_MARGIN && stabilized {
        Summability::SummableEvidence
    } else {
        Summability::Inconclusive
    };
    Ok(SummabilityReport { partial_sum, tail_ratio, classification, window, terms: len })
}
