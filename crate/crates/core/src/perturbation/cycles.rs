use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numerics::{HolomorphicMap, MapSpec};
use crate::{Error, Result};

const NEWTON_MAX_STEPS: usize = 100;
/// Cycles are keyed by their smallest point rounded to this grid.
const KEY_GRID: f64 = 1e-8;
/// `|1 - rho|` at or below this counts as parabolic.
pub const PARABOLIC_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleStability {
    Attracting,
    Indifferent,
    Repelling,
}

/// A periodic orbit `p, R(p), ..., R^{n-1}(p)` with multiplier
/// `rho = DR^n(p)` and residual `|R^n(p) - p|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cycle {
    pub points: Vec<Complex64>,
    pub period: usize,
    pub multiplier: Complex64,
    pub residual: f64,
}

impl Cycle {
    /// Builds the cycle through `p` under `map`.
    pub fn from_point<M: HolomorphicMap + ?Sized>(map: &M, p: Complex64, period: usize) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidInput("period must be >= 1".into()));
        }
        let mut points = Vec::with_capacity(period);
        let mut multiplier = Complex64::new(1.0, 0.0);
        let mut z = p;
        for _ in 0..period {
            points.push(z);
            let (next, dz) = map.eval(z)?;
            multiplier *= dz;
            z = next;
        }
        Ok(Cycle { points, period, multiplier, residual: (z - p).norm() })
    }

    pub fn base_point(&self) -> Complex64 {
        self.points[0]
    }

    pub fn stability(&self) -> CycleStability {
        let m = self.multiplier.norm();
        if (m - 1.0).abs() <= PARABOLIC_TOL {
            CycleStability::Indifferent
        } else if m < 1.0 {
            CycleStability::Attracting
        } else {
            CycleStability::Repelling
        }
    }

    pub fn is_repelling(&self) -> bool {
        self.stability() == CycleStability::Repelling
    }

    /// The same cycle started at its smallest point in `(Re, Im)` order
    /// after rounding to the key grid.
    pub fn canonical(&self) -> Cycle {
        let start = (0..self.period).min_by_key(|&i| grid_key(self.points[i])).unwrap_or(0);
        let mut points = self.points.clone();
        points.rotate_left(start);
        Cycle { points, ..self.clone() }
    }

    fn key(&self) -> (i64, i64) {
        self.points.iter().map(|&z| grid_key(z)).min().unwrap_or((0, 0))
    }
}

fn grid_key(z: Complex64) -> (i64, i64) {
    ((z.re / KEY_GRID).round() as i64, (z.im / KEY_GRID).round() as i64)
}

/// Newton's method on `R^n(z) - z`. Returns the converged point or `None`.
pub(crate) fn newton_periodic<M: HolomorphicMap + ?Sized>(map: &M, start: Complex64, period: usize) -> Option<Complex64> {
    let mut z = start;
    for _ in 0..NEWTON_MAX_STEPS {
        let (w, dw) = map.eval_iterate(z, period).ok()?;
        let g = w - z;
        if g.norm() == 0.0 {
            return Some(z);
        }
        let mut step = g / (dw - 1.0);
        if !(step.re.is_finite() && step.im.is_finite()) {
            return None;
        }
        // damp wild steps far from any root
        let cap = 0.5 * (1.0 + z.norm());
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        z -= step;
        if z.norm() > 1e8 {
            return None;
        }
        if step.norm() <= 1e-14 * 1f64.max(z.norm()) {
            return Some(z);
        }
    }
    None
}

/// Cycles of exact period `period` reached by Newton's method from `seeds`.
///
/// Points whose residual `|R^n(p) - p|` exceeds `tol * max(1, |p|)` are
/// dropped, as are points of a proper divisor period. Each cycle appears once,
/// rotated to its canonical start; the result is ordered by that start.
pub fn find_cycles(map: &MapSpec, period: usize, seeds: &[Complex64], tol: f64) -> Result<Vec<Cycle>> {
    find_cycles_in(map, period, seeds, tol)
}

pub(crate) fn find_cycles_in<M: HolomorphicMap + ?Sized>(
    map: &M,
    period: usize,
    seeds: &[Complex64],
    tol: f64,
) -> Result<Vec<Cycle>> {
    if period == 0 {
        return Err(Error::InvalidInput("period must be >= 1".into()));
    }
    if seeds.is_empty() {
        return Err(Error::InvalidInput("seed list is empty".into()));
    }
    let mut found: Vec<Cycle> = Vec::new();
    for &seed in seeds {
        let Some(p) = newton_periodic(map, seed, period) else { continue };
        let Ok(cycle) = Cycle::from_point(map, p, period) else { continue };
        if !(cycle.residual <= tol * 1f64.max(p.norm())) {
            continue;
        }
        if has_shorter_period(map, p, period) {
            continue;
        }
        let duplicate = found.iter().any(|known| {
            known.points.iter().any(|q| (q - p).norm() <= 10.0 * KEY_GRID * 1f64.max(p.norm()))
        });
        if !duplicate {
            found.push(cycle.canonical());
        }
    }
    found.sort_by_key(|c| c.key());
    Ok(found)
}

fn has_shorter_period<M: HolomorphicMap + ?Sized>(map: &M, p: Complex64, period: usize) -> bool {
    (1..period).filter(|q| period % q == 0).any(|q| {
        map.eval_iterate(p, q)
            .map(|(w, _)| (w - p).norm() <= 10.0 * KEY_GRID * 1f64.max(p.norm()))
            .unwrap_or(false)
    })
}

/// A square grid of `n x n` seeds covering `[-radius, radius]^2`.
pub fn grid_seeds(radius: f64, n: usize) -> Vec<Complex64> {
    let n = n.max(1);
    let step = if n > 1 { 2.0 * radius / (n - 1) as f64 } else { 0.0 };
    (0..n)
        .flat_map(|i| (0..n).map(move |j| Complex64::new(-radius + step * j as f64, -radius + step * i as f64)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fixed_points_of_z_squared() {
        let m = MapSpec::unicritical(2, c(0.0, 0.0)).unwrap();
        let cycles = find_cycles(&m, 1, &grid_seeds(2.0, 9), 1e-10).unwrap();
        assert_eq!(cycles.len(), 2);
        assert!(cycles[0].base_point().norm() < 1e-12);
        assert_eq!(cycles[0].multiplier.norm(), 0.0);
        assert!((cycles[1].base_point() - c(1.0, 0.0)).norm() < 1e-12);
        assert!((cycles[1].multiplier - c(2.0, 0.0)).norm() < 1e-12);
        assert_eq!(cycles[1].stability(), CycleStability::Repelling);
    }

    #[test]
    fn two_cycle_of_z_squared() {
        let m = MapSpec::unicritical(2, c(0.0, 0.0)).unwrap();
        let cycles = find_cycles(&m, 2, &grid_seeds(2.0, 15), 1e-10).unwrap();
        assert_eq!(cycles.len(), 1);
        let cyc = &cycles[0];
        let omega = Complex64::from_polar(1.0, TAU / 3.0);
        // canonical start is the point with the smaller imaginary part
        assert!((cyc.points[0] - omega * omega).norm() < 1e-12);
        assert!((cyc.points[1] - omega).norm() < 1e-12);
        assert!((cyc.multiplier - c(4.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn chebyshev_fixed_points() {
        let m = MapSpec::unicritical(2, c(-2.0, 0.0)).unwrap();
        let cycles = find_cycles(&m, 1, &grid_seeds(3.0, 11), 1e-10).unwrap();
        assert_eq!(cycles.len(), 2);
        assert!((cycles[0].base_point() - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((cycles[0].multiplier - c(-2.0, 0.0)).norm() < 1e-12);
        assert!((cycles[1].base_point() - c(2.0, 0.0)).norm() < 1e-12);
        assert!((cycles[1].multiplier - c(4.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn multiplier_is_product_of_derivatives() {
        let m = MapSpec::unicritical(2, c(-0.4, 0.6)).unwrap();
        for period in 1..=5 {
            for cyc in find_cycles(&m, period, &grid_seeds(2.0, 25), 1e-9).unwrap() {
                assert_eq!(cyc.period, period);
                let product: Complex64 = cyc.points.iter().map(|&z| 2.0 * z).product();
                assert!((product - cyc.multiplier).norm() <= 1e-10 * cyc.multiplier.norm().max(1.0));
            }
        }
    }

    #[test]
    fn quadratic_has_the_expected_number_of_cycles() {
        // z^2 + c has (2^n - sum over proper divisors) / n cycles of exact period n
        let m = MapSpec::unicritical(2, c(-0.12, 0.75)).unwrap();
        let seeds = grid_seeds(2.0, 60);
        assert_eq!(find_cycles(&m, 3, &seeds, 1e-9).unwrap().len(), 2);
        assert_eq!(find_cycles(&m, 4, &seeds, 1e-9).unwrap().len(), 3);
    }

    #[test]
    fn empty_when_nothing_converges() {
        let m = MapSpec::unicritical(2, c(0.0, 0.0)).unwrap();
        assert!(find_cycles(&m, 1, &[c(1e9, 0.0)], 1e-10).unwrap().is_empty());
        assert!(find_cycles(&m, 1, &[], 1e-10).is_err());
    }
}
