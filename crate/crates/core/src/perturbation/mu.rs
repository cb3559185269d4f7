use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::VectorFieldSpec;
use crate::dynamics::{default_escape_radius, iterate_orbit, summability_report, OrbitRecord, Summability};
use crate::numerics::{MapSpec, Polynomial, XComplex};
use crate::{Error, Result};

/// `|mu|` must exceed the tail bound by this much to count as nonvanishing.
pub const NONVANISHING_THRESHOLD: f64 = 1e-8;
/// Moment vectors with Euclidean norm below this have no witness.
pub const WITNESS_THRESHOLD: f64 = 1e-12;

/// Value of `mu_{R,c}(v) = sum_k v(R^k(c)) / DR^k(R(c))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuResult {
    pub value: Complex64,
    /// `partial[N]` is the sum of the terms `k <= N`.
    pub partial: Vec<Complex64>,
    pub tail_bound: f64,
    pub converged: bool,
    pub terms_used: usize,
    /// Tail ratio of the orbit's cocycle used for the bound.
    pub tail_ratio: f64,
    /// Set by [`mu_constant_unicritical`]: whether `|mu|` clears the tail
    /// bound by [`NONVANISHING_THRESHOLD`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonvanishing: Option<bool>,
}

fn summability_window(orbit: &OrbitRecord) -> usize {
    (orbit.points.len() / 4).clamp(1, 64)
}

/// Tail ratio of a clean, not-divergent orbit.
fn tail_ratio_for(orbit: &OrbitRecord) -> Result<f64> {
    let report = summability_report(orbit, summability_window(orbit))?;
    if report.classification == Summability::DivergentEvidence {
        return Err(Error::NotSummable(format!("tail ratio {:.6}", report.tail_ratio)));
    }
    Ok(report.tail_ratio)
}

/// Sums `v(R^k(c)) / DR^k(R(c))` until the geometric tail bound drops below
/// `tol` or `n_max` terms (or the orbit) run out.
///
/// The tail bound after term `k` is `max|v| / |DR^k(R(c))| / (1 - r)` with
/// `max|v|` taken over the orbit and `r` the cocycle tail ratio, so a field
/// that happens to vanish at one orbit point does not stop the sum early.
pub fn mu_functional(orbit: &OrbitRecord, v: &VectorFieldSpec, tol: f64, n_max: usize) -> Result<MuResult> {
    let r = tail_ratio_for(orbit)?;
    let terms = orbit.terms().min(n_max);
    let points = &orbit.points[..terms.max(1)];
    v.check_poles_against(points)?;
    let values: Vec<Complex64> = points.iter().map(|&z| v.value(z)).collect::<Result<_>>()?;
    let vmax = values.iter().map(|w| w.norm()).fold(0.0, f64::max);
    let geometric = if r < 1.0 { 1.0 / (1.0 - r) } else { f64::INFINITY };

    let mut partial = Vec::with_capacity(terms);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut tail_bound = f64::INFINITY;
    let mut converged = false;
    for (k, &value) in values.iter().enumerate().take(terms) {
        let inv = orbit.cocycle[k].recip().ok_or_else(|| Error::InvalidOrbit(format!("zero cocycle at {k}")))?;
        let term = (inv * value).to_complex();
        sum += term;
        partial.push(sum);
        let inv_abs = inv.abs();
        tail_bound = if vmax == 0.0 { 0.0 } else { vmax * inv_abs * geometric };
        if tail_bound < tol {
            converged = true;
            break;
        }
    }
    Ok(MuResult {
        value: sum,
        terms_used: partial.len(),
        partial,
        tail_bound,
        converged,
        tail_ratio: r,
        nonvanishing: None,
    })
}

/// `mu_{p_c, 0}(1) = sum_k 1 / Dp_c^k(c)` for `p_c = z^d + c`.
pub fn mu_constant_unicritical(c: Complex64, d: u32, tol: f64, n_max: usize) -> Result<MuResult> {
    let map = MapSpec::unicritical(d, c)?;
    let orbit = iterate_orbit(&map, Complex64::new(0.0, 0.0), n_max, default_escape_radius(c, d))?;
    if let Some(k) = orbit.escaped_at {
        return Err(Error::NotSummable(format!("critical orbit escapes at iteration {k}")));
    }
    let report = summability_report(&orbit, summability_window(&orbit))?;
    if report.classification != Summability::SummableEvidence {
        return Err(Error::NotSummable(format!(
            "{} (tail ratio {:.6})",
            report.classification.as_str(),
            report.tail_ratio
        )));
    }
    let mut result = mu_functional(&orbit, &VectorFieldSpec::constant(Complex64::new(1.0, 0.0)), tol, n_max)?;
    result.nonvanishing = Some(result.value.norm() > result.tail_bound + NONVANISHING_THRESHOLD);
    Ok(result)
}

/// Moments `m_j = mu(z^j)` for `j = 0..=max_degree`, using every available
/// orbit term.
pub fn moment_vector(orbit: &OrbitRecord, max_degree: usize, tol: f64) -> Result<Vec<Complex64>> {
    (0..=max_degree)
        .map(|j| mu_functional(orbit, &VectorFieldSpec::monomial(j), tol, orbit.terms()).map(|m| m.value))
        .collect()
}

/// The polynomial field of unit coefficient norm maximizing `|mu(v)|`.
///
/// `mu(sum a_j z^j) = sum a_j m_j` is linear in the coefficients, so the
/// maximizer is `a_j = conj(m_j) / |m|` with value `|m|`.
pub fn find_witness_field(moments: &[Complex64]) -> Result<(VectorFieldSpec, Complex64)> {
    if moments.is_empty() {
        return Err(Error::InvalidInput("no moments supplied".into()));
    }
    let norm = moments.iter().map(|m| m.norm_sqr()).sum::<f64>().sqrt();
    if norm < WITNESS_THRESHOLD {
        return Err(Error::NoWitness);
    }
    let coeffs = moments.iter().map(|m| m.conj() / norm).collect();
    Ok((VectorFieldSpec::polynomial(Polynomial::new(coeffs)), Complex64::new(norm, 0.0)))
}

/// Direct evaluation of `mu(v)` over the first `terms` orbit points in
/// extended arithmetic, without tail handling.
pub(crate) fn truncated_sum(orbit: &OrbitRecord, v: &VectorFieldSpec, terms: usize) -> Result<XComplex> {
    let mut sum = XComplex::ZERO;
    for k in 0..terms {
        let inv = orbit.cocycle[k].recip().ok_or_else(|| Error::InvalidOrbit(format!("zero cocycle at {k}")))?;
        sum = sum.checked_add(&inv.checked_mul(&XComplex::try_from_complex(v.value(orbit.points[k])?)?)?)?;
    }
    Ok(sum)
}
