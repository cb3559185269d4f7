//! Simultaneous root finding (Aberth-Ehrlich iteration).

use num_complex::Complex64;

use super::Polynomial;
use crate::{Error, Result};

const MAX_ITERATIONS: usize = 500;
/// Extra sweeps after every root meets the residual test; each sweep
/// roughly cubes the error of a simple root.
const POLISH_SWEEPS: usize = 2;
/// Roots closer than this (relative to `max(1, |z|)`) are one root.
pub const CLUSTER_TOL: f64 = 1e-7;

/// All complex roots of `p`, repeated according to multiplicity.
///
/// Every returned root satisfies `|p(z)| / sum |a_j| |z|^j < max(tol, rounding floor)`.
/// Zero roots are split off exactly; the remaining roots are found together
/// from seeds on the circle of the Cauchy bound.
pub fn poly_roots(p: &Polynomial, tol: f64) -> Result<Vec<Complex64>> {
    if p.degree() == 0 {
        return Err(Error::InvalidInput("root finding needs degree >= 1".into()));
    }
    let coeffs = p.coeffs();
    let zeros = coeffs.iter().take_while(|a| a.re == 0.0 && a.im == 0.0).count();
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let reduced = Polynomial::new(coeffs[zeros..].to_vec());
    match reduced.degree() {
        0 => {}
        1 => {
            let c = reduced.coeffs();
            roots.push(-c[0] / c[1]);
        }
        _ => roots.extend(aberth(&reduced, tol)?),
    }
    Ok(roots)
}

fn aberth(p: &Polynomial, tol: f64) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let lead = p.leading().norm();
    let cauchy = 1.0 + p.coeffs()[..n].iter().map(|a| a.norm() / lead).fold(0.0, f64::max);
    // the offset angle breaks the symmetry of real polynomials
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(cauchy, theta)
        })
        .collect();

    let floor = 8.0 * (n as f64) * f64::EPSILON;
    let threshold = tol.max(floor);
    let mut polished = 0;
    for _ in 0..MAX_ITERATIONS {
        let mut all_converged = true;
        for i in 0..n {
            let (pz, dpz) = p.eval_with_derivative(z[i]);
            let scale = p.abs_scale(z[i]);
            if pz.norm() <= threshold * scale {
                if pz.norm() <= floor * scale {
                    // nothing further to gain for this root
                    continue;
                }
            } else {
                all_converged = false;
            }
            let ratio = pz / dpz;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .filter(|w| w.re.is_finite() && w.im.is_finite())
                .sum();
            let mut step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !(step.re.is_finite() && step.im.is_finite()) {
                // derivative vanished or roots collided: nudge off the point
                step = Complex64::new(1e-8, 1e-8) * (1.0 + z[i].norm());
            }
            z[i] -= step;
        }
        if all_converged {
            if polished == POLISH_SWEEPS {
                return Ok(z);
            }
            polished += 1;
        }
    }
    Err(Error::RootFinding { iterations: MAX_ITERATIONS })
}

/// Groups roots within [`CLUSTER_TOL`] of each other, returning each
/// cluster's mean and size.
pub fn cluster_roots(roots: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for &r in roots {
        let hit = clusters
            .iter_mut()
            .find(|(center, _)| (*center - r).norm() <= tol * 1f64.max(r.norm()));
        match hit {
            Some((center, count)) => {
                *center = (*center * *count as f64 + r) / (*count + 1) as f64;
                *count += 1;
            }
            None => clusters.push((r, 1)),
        }
    }
    clusters
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn quadratic() {
        let r = sorted(poly_roots(&Polynomial::from_real(&[-1.0, 0.0, 1.0]), 1e-14).unwrap());
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn linear_and_zero_roots() {
        assert_eq!(poly_roots(&Polynomial::from_real(&[0.0, 2.0]), 1e-12).unwrap(), vec![c(0.0, 0.0)]);
        let r = poly_roots(&Polynomial::from_real(&[0.0, 0.0, 0.0, 1.0]), 1e-12).unwrap();
        assert_eq!(r, vec![c(0.0, 0.0); 3]);
        assert!(poly_roots(&Polynomial::one(), 1e-12).is_err());
    }

    #[test]
    fn cube_roots_of_unity() {
        let r = poly_roots(&Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]), 1e-14).unwrap();
        assert_eq!(r.len(), 3);
        for k in 0..3 {
            let expected = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0);
            let best = r.iter().map(|z| (z - expected).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-12, "root {k} off by {best}");
        }
    }

    #[test]
    fn double_root_clusters() {
        // (z - 1)^2 (z + 2)
        let p = Polynomial::from_roots(&[c(1.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0)], c(1.0, 0.0));
        let r = poly_roots(&p, 1e-12).unwrap();
        let clusters = cluster_roots(&r, CLUSTER_TOL);
        assert_eq!(clusters.len(), 2);
        let double = clusters.iter().find(|(_, m)| *m == 2).unwrap();
        assert!((double.0 - c(1.0, 0.0)).norm() < 1e-7);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn reconstruction_recovers_coefficients(
            n in 2usize..=12,
            seed_angles in proptest::collection::vec(0.0f64..std::f64::consts::TAU, 12),
            radii in proptest::collection::vec(0.3f64..2.0, 12),
            lead_re in 0.5f64..2.0,
        ) {
            // roots on distinct rays with distinct radii are well separated
            let roots: Vec<Complex64> = (0..n)
                .map(|k| {
                    let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.1 * seed_angles[k] / n as f64;
                    Complex64::from_polar(radii[k], theta)
                })
                .collect();
            let lead = c(lead_re, 0.25);
            let p = Polynomial::from_roots(&roots, lead);
            let found = poly_roots(&p, 1e-13).unwrap();
            let q = Polynomial::from_roots(&found, p.leading());
            let scale = p.max_abs_coeff();
            for (a, b) in p.coeffs().iter().zip(q.coeffs()) {
                prop_assert!((a - b).norm() <= 1e-8 * scale, "{} vs {}", a, b);
            }
        }
    }
}
