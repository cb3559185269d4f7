use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::roots::{cluster_roots, poly_roots, CLUSTER_TOL};
use super::Polynomial;
use crate::{Error, Result};

/// Relative tolerance for poles and for shared numerator/denominator roots.
pub const POLE_TOL: f64 = 1e-10;
/// Residual bound for stored critical points, relative to the evaluation scale.
pub const CRITICAL_RESIDUAL_TOL: f64 = 1e-10;
const ROOT_TOL: f64 = 1e-14;

/// Anything that can be evaluated together with its complex derivative.
///
/// Implemented by [`MapSpec`] and by perturbed families `R + lambda v`, so
/// cycle finding and continuation work on either.
pub trait HolomorphicMap {
    fn eval(&self, z: Complex64) -> Result<(Complex64, Complex64)>;

    /// `R^n(z)` and `DR^n(z)`.
    fn eval_iterate(&self, z: Complex64, n: usize) -> Result<(Complex64, Complex64)> {
        let mut w = z;
        let mut d = Complex64::new(1.0, 0.0);
        for _ in 0..n {
            let (next, dw) = self.eval(w)?;
            d *= dw;
            w = next;
        }
        Ok((w, d))
    }
}

/// Which closed form the map has, when it has one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum MapForm {
    /// `z^d + c`
    Unicritical { d: u32, c: Complex64 },
    Rational,
}

/// A rational map `numerator / denominator` of degree `d >= 2` with its
/// finite critical points.
///
/// Theory applied to these maps assumes the Julia set avoids infinity; the
/// caller is responsible for choosing coordinates in which that holds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    numerator: Polynomial,
    denominator: Polynomial,
    degree: usize,
    critical_points: Vec<Complex64>,
    form: MapForm,
}

impl MapSpec {
    /// `z^d + c`, critical point `0`.
    pub fn unicritical(d: u32, c: Complex64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidInput(format!("unicritical degree must be >= 2, got {d}")));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); d as usize + 1];
        coeffs[0] = c;
        coeffs[d as usize] = Complex64::new(1.0, 0.0);
        Ok(MapSpec {
            numerator: Polynomial::new(coeffs),
            denominator: Polynomial::one(),
            degree: d as usize,
            critical_points: vec![Complex64::new(0.0, 0.0)],
            form: MapForm::Unicritical { d, c },
        })
    }

    pub fn polynomial(p: Polynomial) -> Result<Self> {
        Self::rational(p, Polynomial::one())
    }

    /// Validates coprimality, computes the degree and the finite critical
    /// points (roots of `N'D - ND'`).
    pub fn rational(numerator: Polynomial, denominator: Polynomial) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::DegenerateMap("denominator is identically zero".into()));
        }
        if numerator.is_zero() {
            return Err(Error::DegenerateMap("numerator is identically zero".into()));
        }
        let degree = numerator.degree().max(denominator.degree());
        if degree < 2 {
            return Err(Error::DegenerateMap(format!("map degree {degree} < 2")));
        }
        if numerator.degree() >= 1 && denominator.degree() >= 1 {
            let num_roots = poly_roots(&numerator, ROOT_TOL)?;
            let den_roots = poly_roots(&denominator, ROOT_TOL)?;
            for a in &num_roots {
                for b in &den_roots {
                    if (a - b).norm() < POLE_TOL * 1f64.max(a.norm()) {
                        return Err(Error::DegenerateMap(format!(
                            "numerator and denominator share the root {a}"
                        )));
                    }
                }
            }
        }
        // normalize a constant denominator into the numerator
        let (numerator, denominator) = if denominator.is_constant() {
            let d0 = denominator.coeffs()[0];
            (numerator.scale(d0.inv()), Polynomial::one())
        } else {
            (numerator, denominator)
        };
        let mut map = MapSpec {
            numerator,
            denominator,
            degree,
            critical_points: Vec::new(),
            form: MapForm::Rational,
        };
        map.critical_points = compute_critical_points(&map)?;
        Ok(map)
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn critical_points(&self) -> &[Complex64] {
        &self.critical_points
    }

    pub fn form(&self) -> MapForm {
        self.form
    }

    pub fn is_polynomial(&self) -> bool {
        self.denominator.is_constant()
    }

    /// Numerator of `DR`, i.e. `N'D - ND'`.
    pub fn derivative_numerator(&self) -> Polynomial {
        self.numerator
            .derivative()
            .mul(&self.denominator)
            .sub(&self.numerator.mul(&self.denominator.derivative()))
    }

    /// `R + lambda * v` for a rational field `v = vn / vd`, as a new map.
    pub fn perturbed(&self, v_num: &Polynomial, v_den: &Polynomial, lambda: Complex64) -> Result<Self> {
        if lambda == Complex64::new(0.0, 0.0) {
            return Ok(self.clone());
        }
        let num = self.numerator.mul(v_den).add(&v_num.mul(&self.denominator).scale(lambda));
        let den = self.denominator.mul(v_den);
        Self::rational(num, den)
    }

    /// Solves `R(z) = w`, returning every preimage with multiplicity.
    pub fn preimages(&self, w: Complex64) -> Result<Vec<Complex64>> {
        if let MapForm::Unicritical { d, c } = self.form {
            let r = w - c;
            if r == Complex64::new(0.0, 0.0) {
                return Ok(vec![r; d as usize]);
            }
            let base = r.powf(1.0 / d as f64);
            return Ok((0..d)
                .map(|k| base * Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / d as f64))
                .collect());
        }
        let eq = self.numerator.sub(&self.denominator.scale(w));
        if eq.degree() == 0 {
            return Err(Error::RootFinding { iterations: 0 });
        }
        poly_roots(&eq, ROOT_TOL)
    }

    /// Finite fixed points, roots of `N(z) - z D(z)`.
    pub fn fixed_points(&self) -> Result<Vec<Complex64>> {
        let identity = Polynomial::monomial(1, Complex64::new(1.0, 0.0));
        let eq = self.numerator.sub(&identity.mul(&self.denominator));
        if eq.degree() == 0 {
            return Ok(Vec::new());
        }
        poly_roots(&eq, ROOT_TOL)
    }
}

impl HolomorphicMap for MapSpec {
    fn eval(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        eval_map(self, z)
    }
}

/// `R(z)` and `DR(z)` by Horner evaluation and the quotient rule.
pub fn eval_map(map: &MapSpec, z: Complex64) -> Result<(Complex64, Complex64)> {
    if let MapForm::Unicritical { d, c } = map.form {
        let zd1 = z.powu(d - 1);
        return Ok((zd1 * z + c, zd1 * d as f64));
    }
    let (n, dn) = map.numerator.eval_with_derivative(z);
    if map.denominator.is_constant() {
        return Ok((n, dn));
    }
    let (d, dd) = map.denominator.eval_with_derivative(z);
    if d.norm() <= POLE_TOL * map.denominator.abs_scale(z) {
        return Err(Error::Pole { z });
    }
    let inv = d.inv();
    Ok((n * inv, (dn * d - n * dd) * inv * inv))
}

/// Finite critical points of `map`, deduplicated.
pub fn critical_points(map: &MapSpec) -> Result<Vec<Complex64>> {
    if let MapForm::Unicritical { .. } = map.form {
        return Ok(vec![Complex64::new(0.0, 0.0)]);
    }
    compute_critical_points(map)
}

/// Critical points with their multiplicities (order of vanishing of `DR`).
pub fn critical_points_with_multiplicity(map: &MapSpec) -> Result<Vec<(Complex64, usize)>> {
    if let MapForm::Unicritical { d, .. } = map.form {
        return Ok(vec![(Complex64::new(0.0, 0.0), d as usize - 1)]);
    }
    let dn = map.derivative_numerator();
    if dn.degree() == 0 {
        return Ok(Vec::new());
    }
    Ok(cluster_roots(&poly_roots(&dn, ROOT_TOL)?, CLUSTER_TOL))
}

fn compute_critical_points(map: &MapSpec) -> Result<Vec<Complex64>> {
    let dn = map.derivative_numerator();
    if dn.is_zero() {
        return Err(Error::DegenerateMap("derivative vanishes identically".into()));
    }
    Ok(critical_points_with_multiplicity(map)?.into_iter().map(|(z, _)| z).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn contains(points: &[Complex64], z: Complex64, tol: f64) -> bool {
        points.iter().any(|p| (p - z).norm() < tol)
    }

    #[test]
    fn unicritical_at_critical_point() {
        let m = MapSpec::unicritical(2, c(-2.0, 0.0)).unwrap();
        assert_eq!(eval_map(&m, c(0.0, 0.0)).unwrap(), (c(-2.0, 0.0), c(0.0, 0.0)));
        assert_eq!(eval_map(&m, c(2.0, 0.0)).unwrap(), (c(2.0, 0.0), c(4.0, 0.0)));
    }

    #[test]
    fn general_polynomial_matches_unicritical_form() {
        let uni = MapSpec::unicritical(3, c(0.3, -0.2)).unwrap();
        let gen = MapSpec::polynomial(Polynomial::new(vec![c(0.3, -0.2), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])).unwrap();
        let z = c(0.7, 0.4);
        let (a, da) = eval_map(&uni, z).unwrap();
        let (b, db) = eval_map(&gen, z).unwrap();
        assert!((a - b).norm() < 1e-15 && (da - db).norm() < 1e-15);
        assert_eq!(gen.critical_points(), &[c(0.0, 0.0)]);
    }

    #[test]
    fn pole_is_reported() {
        let m = MapSpec::rational(Polynomial::from_real(&[1.0, 0.0, 1.0]), Polynomial::from_real(&[-1.0, 0.0, 1.0])).unwrap();
        assert!(matches!(eval_map(&m, c(1.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn critical_points_hand_cases() {
        let m = MapSpec::unicritical(2, c(0.25, 0.1)).unwrap();
        assert_eq!(critical_points(&m).unwrap(), vec![c(0.0, 0.0)]);

        let cubic = MapSpec::polynomial(Polynomial::from_real(&[0.0, -3.0, 0.0, 1.0])).unwrap();
        let cp = critical_points(&cubic).unwrap();
        assert_eq!(cp.len(), 2);
        assert!(contains(&cp, c(1.0, 0.0), 1e-12) && contains(&cp, c(-1.0, 0.0), 1e-12));

        // (z^2 + 1) / z has DR = (z^2 - 1) / z^2
        let r = MapSpec::rational(Polynomial::from_real(&[1.0, 0.0, 1.0]), Polynomial::from_real(&[0.0, 1.0])).unwrap();
        let cp = critical_points(&r).unwrap();
        assert_eq!(cp.len(), 2);
        assert!(contains(&cp, c(1.0, 0.0), 1e-12) && contains(&cp, c(-1.0, 0.0), 1e-12));
        for &z in &cp {
            assert!(eval_map(&r, z).unwrap().1.norm() < CRITICAL_RESIDUAL_TOL);
        }
    }

    #[test]
    fn shared_root_is_degenerate() {
        let num = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        let den = Polynomial::from_real(&[2.0, 0.0, 2.0]);
        assert!(matches!(MapSpec::rational(num, den), Err(Error::DegenerateMap(_))));
        // degree one maps are rejected too
        assert!(MapSpec::polynomial(Polynomial::from_real(&[0.0, 1.0])).is_err());
    }

    #[test]
    fn derivative_matches_central_difference() {
        let maps = [
            MapSpec::unicritical(2, c(-0.75, 0.1)).unwrap(),
            MapSpec::polynomial(Polynomial::from_real(&[0.5, -3.0, 0.2, 1.0])).unwrap(),
            MapSpec::rational(Polynomial::from_real(&[1.0, 0.0, 1.0]), Polynomial::from_real(&[0.0, 1.0])).unwrap(),
            MapSpec::rational(Polynomial::from_real(&[0.2, 1.0, 0.0, 1.0]), Polynomial::from_real(&[3.0, 0.0, 1.0])).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = 1e-6;
        for map in &maps {
            let mut checked = 0;
            while checked < 100 {
                let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let den_ok = map.denominator().eval(z).norm() > 1e-2;
                if !den_ok {
                    continue;
                }
                let (_, d) = eval_map(map, z).unwrap();
                let fd = (eval_map(map, z + h).unwrap().0 - eval_map(map, z - h).unwrap().0) / (2.0 * h);
                assert!((d - fd).norm() <= 1e-6 * d.norm().max(1.0), "{d} vs {fd}");
                checked += 1;
            }
        }
    }

    #[test]
    fn preimages_and_fixed_points() {
        let m = MapSpec::unicritical(2, c(-2.0, 0.0)).unwrap();
        let fp = m.fixed_points().unwrap();
        assert!(contains(&fp, c(2.0, 0.0), 1e-12) && contains(&fp, c(-1.0, 0.0), 1e-12));
        for w in m.preimages(c(0.5, 0.0)).unwrap() {
            assert!((eval_map(&m, w).unwrap().0 - c(0.5, 0.0)).norm() < 1e-14);
        }
        let r = MapSpec::rational(Polynomial::from_real(&[1.0, 0.0, 1.0]), Polynomial::from_real(&[0.0, 1.0])).unwrap();
        for w in r.preimages(c(0.3, 0.7)).unwrap() {
            assert!((eval_map(&r, w).unwrap().0 - c(0.3, 0.7)).norm() < 1e-12);
        }
    }
}
