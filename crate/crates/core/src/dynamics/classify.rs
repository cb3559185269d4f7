use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Two orbit points closer than this (relative) count as the same point
/// during cycle detection.
pub const CYCLE_DETECT_TOL: f64 = 1e-9;
const NEWTON_STEPS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParameterKind {
    Escaping,
    Attracting,
    Undecided,
}

impl ParameterKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ParameterKind::Escaping => "escaping",
            ParameterKind::Attracting => "attracting",
            ParameterKind::Undecided => "undecided",
        }
    }
}

/// Outcome of following the critical orbit of `z^d + c`.
///
/// `Attracting` always carries a period and a multiplier of modulus below 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterClass {
    pub kind: ParameterKind,
    pub period: Option<usize>,
    pub multiplier: Option<Complex64>,
    pub iterations_used: usize,
}

impl ParameterClass {
    fn undecided(iterations_used: usize) -> Self {
        ParameterClass { kind: ParameterKind::Undecided, period: None, multiplier: None, iterations_used }
    }
}

/// Escaping / attracting / undecided for the critical orbit of `z^d + c`.
///
/// Uses Brent's cycle detection with tolerance on the raw orbit, then
/// refines the detected cycle by Newton's method before judging its
/// multiplier. Anything not decided within `n_max` iterations is undecided.
pub fn classify_parameter(c: Complex64, d: u32, n_max: usize, escape_radius: f64) -> ParameterClass {
    assert!(d >= 2, "unicritical degree must be >= 2");
    let f = |z: Complex64| z.powu(d) + c;
    let escaped = |z: Complex64| !(z.re.is_finite() && z.im.is_finite()) || z.norm() > escape_radius;
    let close = |a: Complex64, b: Complex64| (a - b).norm() <= CYCLE_DETECT_TOL * 1f64.max(a.norm());

    let mut power = 1usize;
    let mut lam = 1usize;
    let mut tortoise = Complex64::new(0.0, 0.0);
    let mut hare = f(tortoise);
    let mut iterations = 1usize;
    loop {
        if escaped(hare) {
            return ParameterClass {
                kind: ParameterKind::Escaping,
                period: None,
                multiplier: None,
                iterations_used: iterations,
            };
        }
        if close(tortoise, hare) {
            break;
        }
        if iterations >= n_max {
            return ParameterClass::undecided(iterations);
        }
        if power == lam {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = f(hare);
        lam += 1;
        iterations += 1;
    }

    let Some(point) = refine_cycle(hare, c, d, lam) else {
        return ParameterClass::undecided(iterations);
    };
    let period = minimal_period(point, c, d, lam);
    let multiplier = cycle_multiplier(point, c, d, period);
    if multiplier.norm() < 1.0 {
        ParameterClass {
            kind: ParameterKind::Attracting,
            period: Some(period),
            multiplier: Some(multiplier),
            iterations_used: iterations,
        }
    } else {
        ParameterClass::undecided(iterations)
    }
}

/// `f^n(z)` and its derivative for `f = z^d + c`.
fn iterate(z: Complex64, c: Complex64, d: u32, n: usize) -> (Complex64, Complex64) {
    let mut w = z;
    let mut dw = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        let wd1 = w.powu(d - 1);
        dw *= wd1 * d as f64;
        w = wd1 * w + c;
    }
    (w, dw)
}

fn refine_cycle(start: Complex64, c: Complex64, d: u32, period: usize) -> Option<Complex64> {
    let mut z = start;
    for _ in 0..NEWTON_STEPS {
        let (w, dw) = iterate(z, c, d, period);
        let g = w - z;
        let dg = dw - 1.0;
        if g.norm() == 0.0 {
            return Some(z);
        }
        let step = g / dg;
        if !(step.re.is_finite() && step.im.is_finite()) {
            return None;
        }
        z -= step;
        if step.norm() <= 1e-14 * 1f64.max(z.norm()) {
            let (w, _) = iterate(z, c, d, period);
            return close_enough(w, z).then_some(z);
        }
    }
    None
}

fn close_enough(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= CYCLE_DETECT_TOL * 1f64.max(a.norm())
}

fn minimal_period(z: Complex64, c: Complex64, d: u32, period: usize) -> usize {
    (1..period)
        .filter(|q| period % q == 0)
        .find(|&q| close_enough(iterate(z, c, d, q).0, z))
        .unwrap_or(period)
}

fn cycle_multiplier(z: Complex64, c: Complex64, d: u32, period: usize) -> Complex64 {
    iterate(z, c, d, period).1
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn superattracting_fixed_point() {
        let class = classify_parameter(c(0.0, 0.0), 2, 1000, 3.0);
        assert_eq!(class.kind, ParameterKind::Attracting);
        assert_eq!(class.period, Some(1));
        assert_eq!(class.multiplier, Some(c(0.0, 0.0)));
    }

    #[test]
    fn escaping_parameter() {
        assert_eq!(classify_parameter(c(1.0, 0.0), 2, 1000, 3.0).kind, ParameterKind::Escaping);
    }

    #[test]
    fn basilica_two_cycle() {
        let class = classify_parameter(c(-1.0, 0.0), 2, 1000, 3.0);
        assert_eq!(class.kind, ParameterKind::Attracting);
        assert_eq!(class.period, Some(2));
        assert_eq!(class.multiplier.unwrap().norm(), 0.0);
    }

    #[test]
    fn attracting_non_super_and_higher_periods() {
        let class = classify_parameter(c(0.1, 0.0), 2, 1000, 3.0);
        assert_eq!(class.period, Some(1));
        let z_fix = (1.0 - (1.0f64 - 0.4).sqrt()) / 2.0;
        assert!((class.multiplier.unwrap() - c(2.0 * z_fix, 0.0)).norm() < 1e-12);

        // the airplane: superattracting 3-cycle near c = -1.7549
        let airplane = classify_parameter(c(-1.754_877_666_246_692_7, 0.0), 2, 5000, 3.0);
        assert_eq!(airplane.kind, ParameterKind::Attracting);
        assert_eq!(airplane.period, Some(3));

        // cubic family, c = 0 superattracting
        assert_eq!(classify_parameter(c(0.0, 0.0), 3, 100, 3.0).period, Some(1));
    }

    #[test]
    fn non_hyperbolic_parameters_are_undecided() {
        // Chebyshev: critical orbit lands on the repelling fixed point 2
        assert_eq!(classify_parameter(c(-2.0, 0.0), 2, 2000, 3.0).kind, ParameterKind::Undecided);
        // Misiurewicz c = i
        assert_eq!(classify_parameter(c(0.0, 1.0), 2, 2000, 3.0).kind, ParameterKind::Undecided);
    }

    #[test]
    fn outside_radius_two_always_escapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let r = rng.gen_range(2.0001..6.0);
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let cc = Complex64::from_polar(r, theta);
            let radius = crate::dynamics::default_escape_radius(cc, 2);
            assert_eq!(classify_parameter(cc, 2, 1000, radius).kind, ParameterKind::Escaping, "c = {cc}");
        }
    }
}
