//! Parameter sweeps over the unicritical families `z^d + c`.
//!
//! Every row is computed independently; results are collected by index, so
//! the output does not depend on the number of workers.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    classify_parameter, default_escape_radius, summability_report, trace_orbit, ParameterKind, Summability,
};
use crate::numerics::MapSpec;
use crate::perturbation::{mu_functional, obstruction_sequence, VectorFieldSpec};
use crate::{Error, Result};

pub const MIN_ORBIT_LENGTH: usize = 16;
/// Cell value for escaping parameters in [`growth_heatmap`].
pub const ESCAPING_SENTINEL: f64 = -1.0;
/// Cell value for attracting parameters in [`growth_heatmap`].
pub const ATTRACTING_SENTINEL: f64 = 0.0;
const MU_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    /// Grid including its edges; the first row is `im_max`.
    Rect { re_min: f64, re_max: f64, im_min: f64, im_max: f64 },
    Path(Vec<Complex64>),
}

/// Which plane [`render_escape`] draws.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Plane {
    /// Pixels are parameters `c`; the critical orbit from 0 is followed.
    Parameter,
    /// Pixels are starting points `z` for the fixed map `z^d + c`.
    Dynamical { c: Complex64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub region: Region,
    pub d: u32,
    /// `(nx, ny)`, ignored for paths.
    pub resolution: (usize, usize),
    pub orbit_length: usize,
    pub field: VectorFieldSpec,
    /// `None` picks the default radius for each parameter.
    pub escape_radius: Option<f64>,
    pub worker_count: usize,
    pub plane: Plane,
}

impl ScanConfig {
    pub fn rect(re: (f64, f64), im: (f64, f64), d: u32, resolution: (usize, usize)) -> Self {
        ScanConfig {
            region: Region::Rect { re_min: re.0, re_max: re.1, im_min: im.0, im_max: im.1 },
            d,
            resolution,
            orbit_length: 256,
            field: VectorFieldSpec::constant(Complex64::new(1.0, 0.0)),
            escape_radius: None,
            worker_count: 1,
            plane: Plane::Parameter,
        }
    }

    pub fn path(points: Vec<Complex64>, d: u32) -> Self {
        ScanConfig { region: Region::Path(points), resolution: (0, 0), ..Self::rect((0.0, 0.0), (0.0, 0.0), d, (1, 1)) }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::InvalidInput(format!("degree must be >= 2, got {}", self.d)));
        }
        if self.orbit_length < MIN_ORBIT_LENGTH {
            return Err(Error::InvalidInput(format!("orbit length must be >= {MIN_ORBIT_LENGTH}")));
        }
        match &self.region {
            Region::Rect { re_min, re_max, im_min, im_max } => {
                if self.resolution.0 == 0 || self.resolution.1 == 0 {
                    return Err(Error::InvalidInput("resolution must be >= 1 in each axis".into()));
                }
                if ![re_min, re_max, im_min, im_max].iter().all(|x| x.is_finite()) {
                    return Err(Error::InvalidInput("region bounds must be finite".into()));
                }
            }
            Region::Path(points) => {
                if points.is_empty() {
                    return Err(Error::InvalidInput("parameter path is empty".into()));
                }
            }
        }
        if let Some(r) = self.escape_radius {
            if !(r > 0.0) {
                return Err(Error::InvalidInput("escape radius must be positive".into()));
            }
        }
        Ok(())
    }

    /// Grid or path points in output order (row-major, top row first).
    pub fn points(&self) -> Vec<Complex64> {
        match &self.region {
            Region::Path(points) => points.clone(),
            Region::Rect { re_min, re_max, im_min, im_max } => {
                let (nx, ny) = self.resolution;
                let axis = |lo: f64, hi: f64, n: usize, i: usize| {
                    if n == 1 {
                        0.5 * (lo + hi)
                    } else {
                        lo + (hi - lo) * i as f64 / (n - 1) as f64
                    }
                };
                (0..ny)
                    .flat_map(|iy| {
                        (0..nx).map(move |ix| {
                            Complex64::new(axis(*re_min, *re_max, nx, ix), axis(*im_max, *im_min, ny, iy))
                        })
                    })
                    .collect()
            }
        }
    }

    fn radius_for(&self, c: Complex64) -> f64 {
        self.escape_radius.unwrap_or_else(|| default_escape_radius(c, self.d))
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.worker_count.max(1))
            .build()
            .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanClass {
    Escaping,
    Attracting,
    /// Neither escape nor an attracting cycle was found within the budget:
    /// a candidate non-hyperbolic parameter.
    Candidate,
}

impl ScanClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScanClass::Escaping => "escaping",
            ScanClass::Attracting => "attracting",
            ScanClass::Candidate => "candidate",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub c: Complex64,
    pub class: ScanClass,
    pub period: Option<usize>,
    pub summability: Option<Summability>,
    pub growth_exponent: Option<f64>,
    pub mu_constant: Option<Complex64>,
    pub flags: Vec<String>,
}

/// Classifies every parameter of the region and, for candidates, measures
/// the obstruction growth with the configured field.
///
/// Per-row failures end up in the row's flags.
pub fn scan_parameters(config: &ScanConfig) -> Result<Vec<ScanRow>> {
    config.validate()?;
    let points = config.points();
    let pool = config.pool()?;
    Ok(pool.install(|| points.par_iter().map(|&c| scan_row(config, c)).collect()))
}

fn scan_row(config: &ScanConfig, c: Complex64) -> ScanRow {
    let radius = config.radius_for(c);
    let class = classify_parameter(c, config.d, config.orbit_length, radius);
    let mut row = ScanRow {
        c,
        class: ScanClass::Candidate,
        period: class.period,
        summability: None,
        growth_exponent: None,
        mu_constant: None,
        flags: Vec::new(),
    };
    match class.kind {
        ParameterKind::Escaping => {
            row.class = ScanClass::Escaping;
            return row;
        }
        ParameterKind::Attracting => {
            row.class = ScanClass::Attracting;
            return row;
        }
        ParameterKind::Undecided => {}
    }

    let map = match MapSpec::unicritical(config.d, c) {
        Ok(m) => m,
        Err(e) => {
            row.flags.push(format!("map: {e}"));
            return row;
        }
    };
    let orbit = match trace_orbit(&map, Complex64::new(0.0, 0.0), config.orbit_length, radius) {
        Ok(o) => o,
        Err(e) => {
            row.flags.push(format!("orbit: {e}"));
            return row;
        }
    };
    if !orbit.warnings.is_empty() {
        row.flags.push(format!("near-relation x{}", orbit.warnings.len()));
    }
    if let Some(k) = orbit.critical_relation {
        row.flags.push(format!("critical-relation@{k}"));
        return row;
    }
    if let Some(k) = orbit.escaped_at {
        row.flags.push(format!("escaped@{k}"));
        return row;
    }

    let window = (orbit.points.len() / 4).clamp(1, 64);
    match summability_report(&orbit, window) {
        Ok(report) => row.summability = Some(report.classification),
        Err(e) => row.flags.push(format!("summability: {e}")),
    }
    match obstruction_sequence(&orbit, &config.field, orbit.terms()) {
        Ok(series) => row.growth_exponent = series.growth_exponent,
        Err(e) => row.flags.push(format!("obstruction: {e}")),
    }
    if row.summability == Some(Summability::SummableEvidence) {
        let one = VectorFieldSpec::constant(Complex64::new(1.0, 0.0));
        match mu_functional(&orbit, &one, MU_TOL, orbit.terms()) {
            Ok(mu) => {
                if !mu.converged {
                    row.flags.push("mu-unconverged".into());
                }
                row.mu_constant = Some(mu.value);
            }
            Err(e) => row.flags.push(format!("mu: {e}")),
        }
    }
    row
}

/// Growth exponents on the scan grid, top row first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Heatmap {
    pub width: usize,
    pub height: usize,
    /// Growth exponent per cell; [`ESCAPING_SENTINEL`] for escaping cells,
    /// [`ATTRACTING_SENTINEL`] for attracting ones, `None` for candidates
    /// without an exponent.
    pub values: Vec<Option<f64>>,
    /// Marks the attracting cells, whose value alone is ambiguous.
    pub attracting: Vec<bool>,
}

impl Heatmap {
    pub fn get(&self, ix: usize, iy: usize) -> Option<f64> {
        self.values[iy * self.width + ix]
    }
}

pub fn growth_heatmap(rows: &[ScanRow], config: &ScanConfig) -> Result<Heatmap> {
    let Region::Rect { .. } = config.region else {
        return Err(Error::Shape("heatmap needs a rectangular scan".into()));
    };
    let (nx, ny) = config.resolution;
    if rows.len() != nx * ny {
        return Err(Error::Shape(format!("{} rows for a {nx}x{ny} grid", rows.len())));
    }
    let values = rows
        .iter()
        .map(|r| match r.class {
            ScanClass::Escaping => Some(ESCAPING_SENTINEL),
            ScanClass::Attracting => Some(ATTRACTING_SENTINEL),
            ScanClass::Candidate => r.growth_exponent,
        })
        .collect();
    let attracting = rows.iter().map(|r| r.class == ScanClass::Attracting).collect();
    Ok(Heatmap { width: nx, height: ny, values, attracting })
}

/// Escape-time counts, top row first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscapeImage {
    pub width: usize,
    pub height: usize,
    pub max_iter: u32,
    pub counts: Vec<u32>,
}

impl EscapeImage {
    pub fn get(&self, ix: usize, iy: usize) -> u32 {
        self.counts[iy * self.width + ix]
    }
}

/// Iterations until `|z| > escape_radius`, or `max_iter` if that never
/// happens. Paths render as a single row.
pub fn render_escape(config: &ScanConfig, max_iter: u32) -> Result<EscapeImage> {
    config.validate()?;
    let (width, height) = match &config.region {
        Region::Rect { .. } => config.resolution,
        Region::Path(p) => (p.len(), 1),
    };
    let points = config.points();
    let d = config.d;
    let pool = config.pool()?;
    let counts = pool.install(|| {
        points
            .par_iter()
            .map(|&pixel| {
                let (mut z, c) = match config.plane {
                    Plane::Parameter => (Complex64::new(0.0, 0.0), pixel),
                    Plane::Dynamical { c } => (pixel, c),
                };
                let radius = config.radius_for(c);
                for n in 1..=max_iter {
                    z = z.powu(d) + c;
                    if !(z.norm() <= radius) {
                        return n;
                    }
                }
                max_iter
            })
            .collect()
    });
    Ok(EscapeImage { width, height, max_iter, counts })
}
