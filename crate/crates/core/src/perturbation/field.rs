use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numerics::{poly_roots, HolomorphicMap, MapSpec, Polynomial, POLE_TOL};
use crate::{Error, Result};

/// Poles closer than this fraction of the orbit diameter to an orbit point
/// are rejected.
pub const POLE_DISTANCE_FRACTION: f64 = 1e-3;

/// A vector field `v = numerator / denominator`, the direction of a
/// perturbation `R + lambda v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorFieldSpec {
    pub numerator: Polynomial,
    pub denominator: Polynomial,
    pub poles: Vec<Complex64>,
}

impl VectorFieldSpec {
    pub fn polynomial(numerator: Polynomial) -> Self {
        VectorFieldSpec { numerator, denominator: Polynomial::one(), poles: Vec::new() }
    }

    pub fn constant(a: Complex64) -> Self {
        Self::polynomial(Polynomial::constant(a))
    }

    pub fn zero() -> Self {
        Self::polynomial(Polynomial::zero())
    }

    /// `z^j`
    pub fn monomial(j: usize) -> Self {
        Self::polynomial(Polynomial::monomial(j, Complex64::new(1.0, 0.0)))
    }

    pub fn rational(numerator: Polynomial, denominator: Polynomial) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::InvalidInput("vector field denominator is zero".into()));
        }
        if denominator.is_constant() {
            let d0 = denominator.coeffs()[0];
            return Ok(Self::polynomial(numerator.scale(d0.inv())));
        }
        let poles = poly_roots(&denominator, 1e-14)?;
        Ok(VectorFieldSpec { numerator, denominator, poles })
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.denominator.is_constant()
    }

    /// `v(z)` and `v'(z)`.
    pub fn eval(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let (n, dn) = self.numerator.eval_with_derivative(z);
        if self.denominator.is_constant() {
            return Ok((n, dn));
        }
        let (d, dd) = self.denominator.eval_with_derivative(z);
        if d.norm() <= POLE_TOL * self.denominator.abs_scale(z) {
            return Err(Error::Pole { z });
        }
        let inv = d.inv();
        Ok((n * inv, (dn * d - n * dd) * inv * inv))
    }

    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval(z)?.0)
    }

    /// Fails if a pole lies within [`POLE_DISTANCE_FRACTION`] of the
    /// diameter of `points` from any of them.
    pub fn check_poles_against(&self, points: &[Complex64]) -> Result<()> {
        if self.poles.is_empty() || points.is_empty() {
            return Ok(());
        }
        let (mut lo, mut hi) = (points[0], points[0]);
        for p in points {
            lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        let diameter = (hi - lo).norm();
        let tol = POLE_DISTANCE_FRACTION * if diameter > 0.0 { diameter } else { 1.0 };
        for &pole in &self.poles {
            for (index, p) in points.iter().enumerate() {
                let distance = (pole - p).norm();
                if distance < tol {
                    return Err(Error::PoleProximity { pole, index, distance });
                }
            }
        }
        Ok(())
    }

    /// `a * self + b * other`
    pub fn combine(&self, a: Complex64, other: &VectorFieldSpec, b: Complex64) -> Result<Self> {
        let num = self
            .numerator
            .mul(&other.denominator)
            .scale(a)
            .add(&other.numerator.mul(&self.denominator).scale(b));
        Self::rational(num, self.denominator.mul(&other.denominator))
    }
}

/// The family member `R + lambda v`.
#[derive(Clone, Copy, Debug)]
pub struct PerturbedMap<'a> {
    pub map: &'a MapSpec,
    pub field: &'a VectorFieldSpec,
    pub lambda: Complex64,
}

impl HolomorphicMap for PerturbedMap<'_> {
    fn eval(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let (r, dr) = self.map.eval(z)?;
        if self.lambda == Complex64::new(0.0, 0.0) {
            return Ok((r, dr));
        }
        let (v, dv) = self.field.eval(z)?;
        Ok((r + self.lambda * v, dr + self.lambda * dv))
    }
}
