//! Python bindings for the critorbit toolkit.
//!
//! Complex numbers cross the boundary as Python `complex`; structured
//! results come back as plain dicts and lists.

use critorbit::dynamics::{self, default_escape_radius, OrbitRecord};
use critorbit::numerics::{self, MapForm, MapSpec, Polynomial, XComplex};
use critorbit::perturbation::{self, Cycle, VectorFieldSpec};
use critorbit::scan::{self, Region, ScanConfig};
use critorbit::{cli, Complex64};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(critorbit, CritorbitError, PyException, "A computation failed for mathematical reasons.");

fn err(e: critorbit::Error) -> PyErr {
    if e.is_usage() {
        PyValueError::new_err(e.to_string())
    } else {
        CritorbitError::new_err(e.to_string())
    }
}

fn xc_pair(x: &XComplex) -> (Complex64, i64) {
    (x.mantissa(), x.exponent())
}

fn field_or_one(field: Option<PyRef<'_, PyVectorField>>) -> VectorFieldSpec {
    field.map(|f| f.inner.clone()).unwrap_or_else(|| VectorFieldSpec::constant(Complex64::new(1.0, 0.0)))
}

/// A rational map N/D, or z^d + c.
#[pyclass(name = "MapSpec", module = "critorbit", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyMapSpec {
    inner: MapSpec,
}

#[pymethods]
impl PyMapSpec {
    #[staticmethod]
    fn unicritical(d: u32, c: Complex64) -> PyResult<Self> {
        MapSpec::unicritical(d, c).map(|inner| Self { inner }).map_err(err)
    }

    /// Coefficients lowest degree first.
    #[staticmethod]
    fn polynomial(coeffs: Vec<Complex64>) -> PyResult<Self> {
        MapSpec::polynomial(Polynomial::new(coeffs)).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    fn rational(numerator: Vec<Complex64>, denominator: Vec<Complex64>) -> PyResult<Self> {
        MapSpec::rational(Polynomial::new(numerator), Polynomial::new(denominator))
            .map(|inner| Self { inner })
            .map_err(err)
    }

    /// Parses "unicritical:d,c", "polynomial:..." or "rational:num/den".
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        cli::parse_map(text).map(|inner| Self { inner }).map_err(err)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn critical_points(&self) -> Vec<Complex64> {
        self.inner.critical_points().to_vec()
    }

    #[getter]
    fn numerator(&self) -> Vec<Complex64> {
        self.inner.numerator().coeffs().to_vec()
    }

    #[getter]
    fn denominator(&self) -> Vec<Complex64> {
        self.inner.denominator().coeffs().to_vec()
    }

    /// `(R(z), R'(z))`
    fn eval(&self, z: Complex64) -> PyResult<(Complex64, Complex64)> {
        numerics::eval_map(&self.inner, z).map_err(err)
    }

    fn __repr__(&self) -> String {
        match self.inner.form() {
            MapForm::Unicritical { d, c } => format!("MapSpec.unicritical({d}, {c})"),
            MapForm::Rational => format!("MapSpec.rational({}, {})", self.inner.numerator(), self.inner.denominator()),
        }
    }
}

/// A polynomial or rational vector field v(z).
#[pyclass(name = "VectorField", module = "critorbit", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyVectorField {
    inner: VectorFieldSpec,
}

#[pymethods]
impl PyVectorField {
    /// Parses a sum of monomials such as "1 - 0.5*z^2 + (1+2i)*z".
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        cli::parse_field(text).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    fn polynomial(coeffs: Vec<Complex64>) -> Self {
        Self { inner: VectorFieldSpec::polynomial(Polynomial::new(coeffs)) }
    }

    #[staticmethod]
    fn constant(a: Complex64) -> Self {
        Self { inner: VectorFieldSpec::constant(a) }
    }

    #[getter]
    fn coefficients(&self) -> Vec<Complex64> {
        self.inner.numerator.coeffs().to_vec()
    }

    fn __call__(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.value(z).map_err(err)
    }
}

/// The forward orbit of a critical point with its derivative cocycle.
#[pyclass(name = "Orbit", module = "critorbit", frozen)]
pub struct PyOrbit {
    inner: OrbitRecord,
}

#[pymethods]
impl PyOrbit {
    #[getter]
    fn points(&self) -> Vec<Complex64> {
        self.inner.points.clone()
    }

    /// `(mantissa, binary exponent)` pairs of `DR^k(R(c))`.
    #[getter]
    fn cocycle(&self) -> Vec<(Complex64, i64)> {
        self.inner.cocycle.iter().map(xc_pair).collect()
    }

    #[getter]
    fn cocycle_log2_abs(&self) -> Vec<f64> {
        self.inner.cocycle.iter().map(|x| x.log2_abs()).collect()
    }

    #[getter]
    fn partial_sums_abs(&self) -> Vec<f64> {
        self.inner.partial_sums_abs.clone()
    }

    #[getter]
    fn terms(&self) -> usize {
        self.inner.terms()
    }

    #[getter]
    fn escaped_at(&self) -> Option<usize> {
        self.inner.escaped_at
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.inner.warnings.clone()
    }

    #[pyo3(signature = (window=None))]
    fn summability<'py>(&self, py: Python<'py>, window: Option<usize>) -> PyResult<Bound<'py, PyDict>> {
        let window = window.unwrap_or_else(|| (self.inner.points.len() / 4).clamp(1, 64));
        let r = dynamics::summability_report(&self.inner, window).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("partial_sum", r.partial_sum)?;
        d.set_item("tail_ratio", r.tail_ratio)?;
        d.set_item("classification", r.classification.as_str())?;
        Ok(d)
    }

    fn __len__(&self) -> usize {
        self.inner.points.len()
    }
}

/// A periodic cycle with its multiplier.
#[pyclass(name = "Cycle", module = "critorbit", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyCycle {
    inner: Cycle,
}

#[pymethods]
impl PyCycle {
    #[staticmethod]
    fn from_point(map: PyRef<'_, PyMapSpec>, point: Complex64, period: usize) -> PyResult<Self> {
        Cycle::from_point(&map.inner, point, period).map(|inner| Self { inner }).map_err(err)
    }

    #[getter]
    fn points(&self) -> Vec<Complex64> {
        self.inner.points.clone()
    }

    #[getter]
    fn period(&self) -> usize {
        self.inner.period
    }

    #[getter]
    fn multiplier(&self) -> Complex64 {
        self.inner.multiplier
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual
    }

    fn __repr__(&self) -> String {
        format!("Cycle(period={}, base={}, multiplier={})", self.inner.period, self.inner.base_point(), self.inner.multiplier)
    }
}

/// Critical orbit of `map` from its `critical`-th critical point.
#[pyfunction]
#[pyo3(signature = (map, critical=0, n_max=2000, escape_radius=None))]
fn trace_orbit(map: PyRef<'_, PyMapSpec>, critical: usize, n_max: usize, escape_radius: Option<f64>) -> PyResult<PyOrbit> {
    let cps = map.inner.critical_points();
    let &cp = cps
        .get(critical)
        .ok_or_else(|| PyValueError::new_err(format!("critical index {critical} out of range ({} points)", cps.len())))?;
    let radius = escape_radius.unwrap_or(match map.inner.form() {
        MapForm::Unicritical { d, c } => default_escape_radius(c, d),
        MapForm::Rational => cli::GENERAL_ESCAPE_RADIUS,
    });
    dynamics::iterate_orbit(&map.inner, cp, n_max, radius).map(|inner| PyOrbit { inner }).map_err(err)
}

fn mu_dict<'py>(py: Python<'py>, r: &perturbation::MuResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("value", r.value)?;
    d.set_item("converged", r.converged)?;
    d.set_item("terms_used", r.terms_used)?;
    d.set_item("tail_bound", r.tail_bound)?;
    d.set_item("tail_ratio", r.tail_ratio)?;
    d.set_item("partial", r.partial.clone())?;
    d.set_item("nonvanishing", r.nonvanishing)?;
    Ok(d)
}

/// `mu(v) = sum_k v(R^k(c)) / DR^k(R(c))`; `field` defaults to 1.
#[pyfunction]
#[pyo3(signature = (orbit, field=None, tol=1e-12, n_max=None))]
fn mu<'py>(
    py: Python<'py>,
    orbit: PyRef<'_, PyOrbit>,
    field: Option<PyRef<'_, PyVectorField>>,
    tol: f64,
    n_max: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let n = n_max.unwrap_or(orbit.inner.terms());
    let r = perturbation::mu_functional(&orbit.inner, &field_or_one(field), tol, n).map_err(err)?;
    mu_dict(py, &r)
}

/// `sum_k 1 / Dp^k(c)` for `p(z) = z^d + c`.
#[pyfunction]
#[pyo3(signature = (c, d=2, tol=1e-12, n_max=2000))]
fn mu_constant<'py>(py: Python<'py>, c: Complex64, d: u32, tol: f64, n_max: usize) -> PyResult<Bound<'py, PyDict>> {
    let r = perturbation::mu_constant_unicritical(c, d, tol, n_max).map_err(err)?;
    mu_dict(py, &r)
}

/// Moments `mu(z^j)` for `j = 0..=degree`.
#[pyfunction]
#[pyo3(signature = (orbit, degree=3, tol=1e-12))]
fn moments(orbit: PyRef<'_, PyOrbit>, degree: usize, tol: f64) -> PyResult<Vec<Complex64>> {
    perturbation::moment_vector(&orbit.inner, degree, tol).map_err(err)
}

/// Unit-norm coefficients maximizing `|mu|`, with the attained value.
#[pyfunction]
fn witness(moments: Vec<Complex64>) -> PyResult<(PyVectorField, Complex64)> {
    let (inner, value) = perturbation::find_witness_field(&moments).map_err(err)?;
    Ok((PyVectorField { inner }, value))
}

/// Obstruction sequence `b_n` for `n <= terms`.
#[pyfunction]
#[pyo3(signature = (orbit, field=None, terms=None))]
fn obstruction<'py>(
    py: Python<'py>,
    orbit: PyRef<'_, PyOrbit>,
    field: Option<PyRef<'_, PyVectorField>>,
    terms: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let n = terms.unwrap_or(orbit.inner.terms());
    let s = perturbation::obstruction_sequence(&orbit.inner, &field_or_one(field), n).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("b", s.b.iter().map(xc_pair).collect::<Vec<_>>())?;
    d.set_item("log_abs", s.b.iter().map(|x| x.ln_abs()).collect::<Vec<_>>())?;
    d.set_item("growth_exponent", s.growth_exponent)?;
    d.set_item("bounded_evidence", s.bounded_evidence.as_str())?;
    Ok(d)
}

/// Escaping / attracting / undecided for the critical orbit of z^d + c.
#[pyfunction]
#[pyo3(signature = (c, d=2, n_max=1000, escape_radius=None))]
fn classify<'py>(
    py: Python<'py>,
    c: Complex64,
    d: u32,
    n_max: usize,
    escape_radius: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    if d < 2 {
        return Err(PyValueError::new_err("degree must be >= 2"));
    }
    let class = dynamics::classify_parameter(c, d, n_max, escape_radius.unwrap_or_else(|| default_escape_radius(c, d)));
    let out = PyDict::new(py);
    out.set_item("kind", class.kind.as_str())?;
    out.set_item("period", class.period)?;
    out.set_item("multiplier", class.multiplier)?;
    out.set_item("iterations_used", class.iterations_used)?;
    Ok(out)
}

/// Cycles of exact period found by Newton's method from a square seed grid.
#[pyfunction]
#[pyo3(signature = (map, period, seeds_per_side=40, radius=2.5, tol=1e-10))]
fn find_cycles(
    map: PyRef<'_, PyMapSpec>,
    period: usize,
    seeds_per_side: usize,
    radius: f64,
    tol: f64,
) -> PyResult<Vec<PyCycle>> {
    let seeds = perturbation::grid_seeds(radius, seeds_per_side);
    let cycles = perturbation::find_cycles(&map.inner, period, &seeds, tol).map_err(err)?;
    Ok(cycles.into_iter().map(|inner| PyCycle { inner }).collect())
}

/// `alpha` on the cycle with `v = alpha o R - DR alpha`, plus residuals.
#[pyfunction]
#[pyo3(signature = (map, cycle, field=None))]
fn solve_alpha(
    map: PyRef<'_, PyMapSpec>,
    cycle: PyRef<'_, PyCycle>,
    field: Option<PyRef<'_, PyVectorField>>,
) -> PyResult<(Vec<Complex64>, Vec<f64>)> {
    let sol = perturbation::solve_alpha_on_cycle(&map.inner, &cycle.inner, &field_or_one(field)).map_err(err)?;
    Ok((sol.alpha, sol.residuals))
}

/// Follows a repelling cycle along `R + lambda v` up to `target`.
#[pyfunction]
#[pyo3(signature = (map, cycle, target, field=None, steps=100))]
fn continue_cycle<'py>(
    py: Python<'py>,
    map: PyRef<'_, PyMapSpec>,
    cycle: PyRef<'_, PyCycle>,
    target: Complex64,
    field: Option<PyRef<'_, PyVectorField>>,
    steps: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let r = perturbation::continue_cycle(&map.inner, &field_or_one(field), &cycle.inner, target, steps).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("lambda_path", r.lambda_path.clone())?;
    d.set_item("base_points", r.cycles.iter().map(|c| c.base_point()).collect::<Vec<_>>())?;
    d.set_item("velocity_at_zero", r.velocity_at_zero)?;
    d.set_item("stopped_reason", r.stopped_reason.as_str())?;
    d.set_item("final_cycle", PyCycle { inner: r.final_cycle().clone() })?;
    Ok(d)
}

/// `(alpha, finite-difference velocity, |difference|)` at the base point.
#[pyfunction]
#[pyo3(signature = (map, cycle, field=None, h=1e-4))]
fn motion_check(
    map: PyRef<'_, PyMapSpec>,
    cycle: PyRef<'_, PyCycle>,
    field: Option<PyRef<'_, PyVectorField>>,
    h: f64,
) -> PyResult<(Complex64, Complex64, f64)> {
    perturbation::motion_velocity_check(&map.inner, &field_or_one(field), &cycle.inner, h).map_err(err)
}

#[allow(clippy::too_many_arguments)]
fn scan_config(
    d: u32,
    path: Option<Vec<Complex64>>,
    rect: Option<(f64, f64, f64, f64)>,
    resolution: (usize, usize),
    orbit_length: usize,
    field: Option<PyRef<'_, PyVectorField>>,
    escape_radius: Option<f64>,
    workers: usize,
) -> PyResult<ScanConfig> {
    let region = match (path, rect) {
        (Some(p), None) => Region::Path(p),
        (None, Some((re_min, re_max, im_min, im_max))) => Region::Rect { re_min, re_max, im_min, im_max },
        _ => return Err(PyValueError::new_err("give exactly one of path or rect")),
    };
    let config = ScanConfig {
        region,
        d,
        resolution,
        orbit_length,
        field: field_or_one(field),
        escape_radius,
        worker_count: workers,
        plane: scan::Plane::Parameter,
    };
    config.validate().map_err(err)?;
    Ok(config)
}

/// Parameter sweep over z^d + c along `path` or over `rect =
/// (re_min, re_max, im_min, im_max)` at `resolution = (nx, ny)`.
#[pyfunction]
#[pyo3(signature = (d=2, path=None, rect=None, resolution=(64, 64), orbit_length=256, field=None, escape_radius=None, workers=1))]
#[allow(clippy::too_many_arguments)]
fn scan_parameters<'py>(
    py: Python<'py>,
    d: u32,
    path: Option<Vec<Complex64>>,
    rect: Option<(f64, f64, f64, f64)>,
    resolution: (usize, usize),
    orbit_length: usize,
    field: Option<PyRef<'_, PyVectorField>>,
    escape_radius: Option<f64>,
    workers: usize,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let config = scan_config(d, path, rect, resolution, orbit_length, field, escape_radius, workers)?;
    let rows = py.detach(|| scan::scan_parameters(&config)).map_err(err)?;
    rows.iter()
        .map(|r| {
            let out = PyDict::new(py);
            out.set_item("c", r.c)?;
            out.set_item("class", r.class.as_str())?;
            out.set_item("period", r.period)?;
            out.set_item("summability", r.summability.map(|s| s.as_str()))?;
            out.set_item("growth_exponent", r.growth_exponent)?;
            out.set_item("mu_constant", r.mu_constant)?;
            out.set_item("flags", r.flags.clone())?;
            Ok(out)
        })
        .collect()
}

/// Escape-time counts as a list of rows (top row first). With `julia`
/// set, the dynamical plane of z^d + julia is drawn instead.
#[pyfunction]
#[pyo3(signature = (rect, resolution, d=2, max_iter=256, julia=None, escape_radius=None, workers=1))]
#[allow(clippy::too_many_arguments)]
fn render_escape(
    py: Python<'_>,
    rect: (f64, f64, f64, f64),
    resolution: (usize, usize),
    d: u32,
    max_iter: u32,
    julia: Option<Complex64>,
    escape_radius: Option<f64>,
    workers: usize,
) -> PyResult<Vec<Vec<u32>>> {
    let mut config = scan_config(d, None, Some(rect), resolution, 16, None, escape_radius, workers)?;
    if let Some(c) = julia {
        config.plane = scan::Plane::Dynamical { c };
    }
    let image = py.detach(|| scan::render_escape(&config, max_iter)).map_err(err)?;
    Ok(image.counts.chunks(image.width.max(1)).map(|row| row.to_vec()).collect())
}

#[pymodule(name = "critorbit")]
fn critorbit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("CritorbitError", m.py().get_type::<CritorbitError>())?;
    m.add_class::<PyMapSpec>()?;
    m.add_class::<PyVectorField>()?;
    m.add_class::<PyOrbit>()?;
    m.add_class::<PyCycle>()?;
    m.add_function(wrap_pyfunction!(trace_orbit, m)?)?;
    m.add_function(wrap_pyfunction!(mu, m)?)?;
    m.add_function(wrap_pyfunction!(mu_constant, m)?)?;
    m.add_function(wrap_pyfunction!(moments, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(obstruction, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(find_cycles, m)?)?;
    m.add_function(wrap_pyfunction!(solve_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(continue_cycle, m)?)?;
    m.add_function(wrap_pyfunction!(motion_check, m)?)?;
    m.add_function(wrap_pyfunction!(scan_parameters, m)?)?;
    m.add_function(wrap_pyfunction!(render_escape, m)?)?;
    Ok(())
}
