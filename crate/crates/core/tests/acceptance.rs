//! Acceptance criteria. Each check prints one PASS/FAIL line directly to
//! stdout (bypassing the test harness capture) and the test fails if any
//! check fails.

use std::io::Write;

use critorbit::cli::write_csv;
use critorbit::dynamics::{classify_parameter, default_escape_radius, trace_orbit, OrbitRecord, ParameterKind};
use critorbit::numerics::{MapSpec, Polynomial, XComplex};
use critorbit::perturbation::{
    continue_cycle, find_cycles, find_witness_field, motion_velocity_check, mu_functional, obstruction_product_sum,
    obstruction_sequence, solve_alpha_on_cycle, BoundedEvidence, Cycle, StopReason, VectorFieldSpec,
};
use critorbit::scan::{scan_parameters, ScanClass, ScanConfig};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn orbit_of(map: &MapSpec, cp: Complex64, n: usize) -> OrbitRecord {
    let radius = match map.form() {
        critorbit::numerics::MapForm::Unicritical { d, c } => default_escape_radius(c, d),
        _ => 1e8,
    };
    trace_orbit(map, cp, n, radius).expect("orbit")
}

fn chebyshev() -> MapSpec {
    MapSpec::unicritical(2, c(-2.0, 0.0)).unwrap()
}

/// mu(1) and mu(z) on z^2 - 2 against the geometric-series closed forms.
fn criterion_1() -> Check {
    let orbit = orbit_of(&chebyshev(), c(0.0, 0.0), 2000);
    // orbit 0, -2, 2, 2, ...; DR^k(-2) = -4^k for k >= 1
    let q = 0.25;
    let oracle_one = 1.0 - q / (1.0 - q);
    let oracle_z = 0.5 - 2.0 * q * q / (1.0 - q);
    let one = mu_functional(&orbit, &VectorFieldSpec::constant(c(1.0, 0.0)), 1e-12, 2000).map_err(|e| e.to_string())?;
    let z = mu_functional(&orbit, &VectorFieldSpec::monomial(1), 1e-12, 2000).map_err(|e| e.to_string())?;
    let e1 = (one.value - c(oracle_one, 0.0)).norm();
    let ez = (z.value - c(oracle_z, 0.0)).norm();
    ensure(e1 < 1e-12 && ez < 1e-12, || format!("errors {e1:e}, {ez:e} exceed 1e-12"))?;
    ensure(one.converged && z.converged, || "series not converged".into())?;
    Ok(format!("mu(1) err {e1:.1e}, mu(z) err {ez:.1e} (tol 1e-12)"))
}

/// Growth exponent of the obstruction sequence on z^2 - 2 with v = 1.
fn criterion_2() -> Check {
    let orbit = orbit_of(&chebyshev(), c(0.0, 0.0), 200);
    let series = obstruction_sequence(&orbit, &VectorFieldSpec::constant(c(1.0, 0.0)), 200).map_err(|e| e.to_string())?;
    let g = series.growth_exponent.ok_or("no growth exponent")?;
    let err = (g - 4f64.ln()).abs();
    ensure(err < 0.02, || format!("growth {g} is {err:.3e} from ln 4"))?;
    ensure(series.bounded_evidence == BoundedEvidence::Unbounded, || {
        format!("evidence {:?}", series.bounded_evidence)
    })?;
    Ok(format!("growth {g:.6} vs ln 4 (|diff| {err:.1e} < 0.02), unbounded"))
}

/// alpha, motion velocity and continuation on z^2 at a fixed point and the
/// 2-cycle, against quadratic-formula oracles.
fn criterion_3() -> Check {
    let map = MapSpec::unicritical(2, c(0.0, 0.0)).unwrap();
    let v = VectorFieldSpec::constant(c(1.0, 0.0));
    let lambda: f64 = 0.1;
    let omega = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);

    // z^2 + lambda: fixed point (1 + sqrt(1 - 4 lambda)) / 2, 2-cycle roots of
    // z^2 + z + 1 + lambda, continued from omega.
    let fixed_oracle = c((1.0 + (1.0 - 4.0 * lambda).sqrt()) / 2.0, 0.0);
    let two_oracle = (c(-1.0, 0.0) + c(-3.0 - 4.0 * lambda, 0.0).sqrt()) / 2.0;
    let cases = [
        ("fixed point", c(1.0, 0.0), 1, c(-1.0, 0.0), fixed_oracle),
        ("2-cycle", omega, 2, (2.0 * omega * omega + 1.0) / -3.0, two_oracle),
    ];
    let mut report = Vec::new();
    for (name, p, period, alpha_oracle, lambda_oracle) in cases {
        let cycle = Cycle::from_point(&map, p, period).map_err(|e| e.to_string())?;
        let sol = solve_alpha_on_cycle(&map, &cycle, &v).map_err(|e| e.to_string())?;
        let ea = (sol.alpha[0] - alpha_oracle).norm();
        ensure(ea <= 1e-14, || format!("{name}: alpha error {ea:e}"))?;
        let (_, _, disc) = motion_velocity_check(&map, &v, &cycle, 1e-4).map_err(|e| e.to_string())?;
        ensure(disc < 1e-6, || format!("{name}: motion discrepancy {disc:e}"))?;
        let run = continue_cycle(&map, &v, &cycle, c(lambda, 0.0), 20).map_err(|e| e.to_string())?;
        ensure(run.stopped_reason == StopReason::ReachedTarget, || format!("{name}: stopped early"))?;
        let el = (run.final_cycle().base_point() - lambda_oracle).norm();
        ensure(el < 1e-10, || format!("{name}: continuation error {el:e}"))?;
        report.push(format!("{name}: alpha {ea:.0e}, motion {disc:.1e}, lambda=0.1 {el:.1e}"));
    }
    Ok(report.join("; "))
}

/// Functional-equation residuals on all cycles of period <= 6 for 20
/// random non-attracting parameters.
fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let v = VectorFieldSpec::constant(c(1.0, 0.0));
    let mut params = 0;
    let mut cycles_checked = 0;
    let mut worst: f64 = 0.0;
    while params < 20 {
        let cp = Complex64::from_polar(2.0 * rng.gen::<f64>().sqrt(), std::f64::consts::TAU * rng.gen::<f64>());
        if classify_parameter(cp, 2, 2000, default_escape_radius(cp, 2)).kind == ParameterKind::Attracting {
            continue;
        }
        params += 1;
        let map = MapSpec::unicritical(2, cp).unwrap();
        let seeds: Vec<Complex64> =
            (0..500).map(|_| c(rng.gen_range(-2.5..2.5), rng.gen_range(-2.5..2.5))).collect();
        for period in 1..=6 {
            let cycles = find_cycles(&map, period, &seeds, 1e-10).map_err(|e| e.to_string())?;
            ensure(!cycles.is_empty(), || format!("no period-{period} cycle for c = {cp}"))?;
            for cycle in cycles {
                let sol = match solve_alpha_on_cycle(&map, &cycle, &v) {
                    Ok(s) => s,
                    Err(critorbit::Error::ParabolicCycle { .. }) => continue,
                    Err(e) => return Err(e.to_string()),
                };
                // independent residual with DR(z) = 2z
                let n = cycle.points.len();
                for i in 0..n {
                    let r = (1.0 - (sol.alpha[(i + 1) % n] - 2.0 * cycle.points[i] * sol.alpha[i])).norm();
                    worst = worst.max(r);
                }
                cycles_checked += 1;
            }
        }
    }
    ensure(worst < 1e-10, || format!("worst residual {worst:e}"))?;
    Ok(format!("{cycles_checked} cycles over 20 parameters, worst residual {worst:.1e} (< 1e-10)"))
}

/// 10^4-term obstruction sequences: each step reproduces the forward
/// recurrence with the same exponent and within 4 ulps, and cocycles reach
/// 4^(10^4) without overflow.
fn criterion_5() -> Check {
    const N: usize = 10_000;
    let v = VectorFieldSpec::constant(c(1.0, 0.0));
    let mut worst_ulp: f64 = 0.0;
    for (name, map) in [("z^2-2", chebyshev()), ("z^2+i", MapSpec::unicritical(2, c(0.0, 1.0)).unwrap())] {
        let orbit = orbit_of(&map, c(0.0, 0.0), N);
        ensure(orbit.terms() >= N, || format!("{name}: orbit too short"))?;
        let series = obstruction_sequence(&orbit, &v, N).map_err(|e| e.to_string())?;
        ensure(series.b.len() == N + 1, || format!("{name}: {} terms", series.b.len()))?;
        for k in 0..N {
            let p = orbit.points[k];
            let step = XComplex::from_complex(2.0 * p) * series.b[k] + XComplex::from_complex(v.value(p).unwrap());
            let stored = series.b[k + 1];
            ensure(step.exponent() == stored.exponent(), || format!("{name}: exponent mismatch at {k}"))?;
            let ulp = step.ulp_distance(&stored).ok_or_else(|| format!("{name}: incomparable at {k}"))?;
            ensure(ulp <= 4.0, || format!("{name}: {ulp} ulps at {k}"))?;
            worst_ulp = worst_ulp.max(ulp);
        }
        if name == "z^2-2" {
            // b_n = -4^(n-1) (1 - (1 - 4^(1-n)) / 3), i.e. -(4/3) 2^(2n-3) for large n
            for n in 30..=N {
                let b = series.b[n];
                ensure(b.exponent() == 2 * n as i64 - 3, || format!("closed form: exponent {} at {n}", b.exponent()))?;
                let err = (b.mantissa() - c(-4.0 / 3.0, 0.0)).norm();
                ensure(err < 1e-12, || format!("closed form: mantissa error {err:e} at {n}"))?;
            }
        }
        for x in &orbit.cocycle {
            ensure(x.mantissa().re.is_finite() && x.mantissa().im.is_finite(), || format!("{name}: non-finite cocycle"))?;
        }
    }
    // Chebyshev: DR^k(-2) = -4^k exactly
    let orbit = orbit_of(&chebyshev(), c(0.0, 0.0), N);
    let last = orbit.cocycle[N];
    ensure(last.exponent() == 2 * N as i64 && last.mantissa() == c(-1.0, 0.0), || format!("cocycle[N] = {last}"))?;
    Ok(format!("2 maps x 10^4 steps, worst {worst_ulp} ulp, cocycle[10^4] = -2^{}", last.exponent()))
}

/// Forward recurrence against cocycle-times-partial-sum for n <= 20.
fn criterion_6() -> Check {
    let cubic = MapSpec::polynomial(Polynomial::from_real(&[0.0, -3.0, 0.0, 1.0])).unwrap();
    let mut cases = vec![
        ("z^2-2", chebyshev(), c(0.0, 0.0)),
        ("z^2+i", MapSpec::unicritical(2, c(0.0, 1.0)).unwrap(), c(0.0, 0.0)),
    ];
    let cps = cubic.critical_points().to_vec();
    ensure(cps.len() == 2, || format!("cubic has {} critical points", cps.len()))?;
    for cp in cps {
        cases.push(("z^3-3z", cubic.clone(), cp));
    }
    let fields = [
        VectorFieldSpec::constant(c(1.0, 0.0)),
        VectorFieldSpec::polynomial(Polynomial::new(vec![c(0.3, 0.1), c(1.0, 0.0), c(-0.2, 0.5)])),
    ];
    let mut worst: f64 = 0.0;
    for (name, map, cp) in &cases {
        let orbit = orbit_of(map, *cp, 40);
        for v in &fields {
            let series = obstruction_sequence(&orbit, v, 20).map_err(|e| e.to_string())?;
            for n in 1..=20 {
                let direct = obstruction_product_sum(&orbit, v, n).map_err(|e| e.to_string())?;
                let a = series.b[n];
                let scale = a.abs().max(direct.abs());
                let diff = (a - direct).abs();
                let rel = if scale == 0.0 { 0.0 } else { diff / scale };
                ensure(rel < 1e-8, || format!("{name} at {cp}: n = {n}, relative {rel:e}"))?;
                worst = worst.max(rel);
            }
        }
    }
    Ok(format!("4 (map, critical point) pairs x 2 fields, worst relative {worst:.1e} (< 1e-8)"))
}

/// Real-path scan classes and worker-count independence.
fn criterion_7() -> Check {
    let path = vec![c(-2.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
    let mut config = ScanConfig::path(path, 2);
    let mut outputs = Vec::new();
    let mut rows_seen = None;
    for workers in [1, 8, 3] {
        config.worker_count = workers;
        let rows = scan_parameters(&config).map_err(|e| e.to_string())?;
        let mut bytes = Vec::new();
        write_csv(&rows, &mut bytes).map_err(|e| e.to_string())?;
        bytes.extend(serde_json::to_vec(&rows).unwrap());
        outputs.push(bytes);
        rows_seen = Some(rows);
    }
    ensure(outputs.windows(2).all(|w| w[0] == w[1]), || "outputs differ between worker counts".into())?;
    let rows = rows_seen.unwrap();
    let got: Vec<_> = rows.iter().map(|r| (r.class, r.period)).collect();
    let want = vec![
        (ScanClass::Candidate, None),
        (ScanClass::Attracting, Some(2)),
        (ScanClass::Attracting, Some(1)),
        (ScanClass::Escaping, None),
    ];
    ensure(got == want, || format!("classes {got:?}"))?;
    Ok("candidate, attracting(2), attracting(1), escaping; identical bytes for 1/8/3 workers".into())
}

/// Linearity of mu on random fields of degree <= 5 and the witness value.
fn criterion_8() -> Check {
    let orbit = orbit_of(&chebyshev(), c(0.0, 0.0), 2000);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let random_c = |rng: &mut ChaCha8Rng| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let field = |rng: &mut ChaCha8Rng| {
            let deg = rng.gen_range(0..=5);
            VectorFieldSpec::polynomial(Polynomial::new((0..=deg).map(|_| random_c(rng)).collect()))
        };
        let v = field(&mut rng);
        let w = field(&mut rng);
        let (a, b) = (random_c(&mut rng), random_c(&mut rng));
        let mu = |f: &VectorFieldSpec| mu_functional(&orbit, f, 1e-14, 2000).map(|m| m.value);
        let lhs = mu(&v.combine(a, &w, b).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let rhs = a * mu(&v).map_err(|e| e.to_string())? + b * mu(&w).map_err(|e| e.to_string())?;
        worst = worst.max((lhs - rhs).norm());
    }
    ensure(worst < 1e-10, || format!("linearity defect {worst:e}"))?;
    let (_, value) = find_witness_field(&[c(2.0 / 3.0, 0.0), c(1.0 / 3.0, 0.0)]).map_err(|e| e.to_string())?;
    let ew = (value - c(5f64.sqrt() / 3.0, 0.0)).norm();
    ensure(ew < 1e-12, || format!("witness value {value}, error {ew:e}"))?;
    Ok(format!("linearity defect {worst:.1e} (< 1e-10), witness sqrt(5)/3 error {ew:.0e} (< 1e-12)"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("1 mu oracle on z^2-2", criterion_1),
        ("2 obstruction growth ln 4", criterion_2),
        ("3 alpha, motion and continuation", criterion_3),
        ("4 cycle functional-equation residuals", criterion_4),
        ("5 10^4-term recurrence in extended range", criterion_5),
        ("6 recurrence vs product-sum", criterion_6),
        ("7 scan classes and determinism", criterion_7),
        ("8 mu linearity and witness", criterion_8),
    ];
    let mut failed = Vec::new();
    let stdout = std::io::stdout();
    for (name, check) in criteria {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let line = match &outcome {
            Ok(detail) => format!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed.push(name);
                format!("FAIL criterion {name}: {why}")
            }
        };
        let _ = writeln!(stdout.lock(), "{line}");
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
