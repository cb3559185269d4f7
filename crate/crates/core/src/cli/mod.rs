//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when the computation itself fails (for
//! example a non-summable orbit or a parabolic cycle), 2 on usage errors.
//! Results go to `--output` or standard output, diagnostics to standard
//! error.
//!
//! `--config FILE` reads flat `key = value` lines (`#` starts a comment);
//! each becomes `--key value` placed before the command-line flags, so flags
//! given explicitly win. The default worker count for `scan` and `render`
//! comes from the `CRITORBIT_WORKERS` environment variable, falling back to
//! the number of available cores.

mod output;
mod parse;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{default_escape_radius, summability_report, trace_orbit, OrbitRecord};
use crate::numerics::{MapForm, MapSpec};
use crate::perturbation::newton_periodic;
use crate::perturbation::{
    continue_cycle, find_cycles, find_witness_field, grid_seeds, moment_vector, motion_velocity_check,
    mu_functional, obstruction_sequence, solve_alpha_on_cycle, Cycle, CycleAlphaSolution, VectorFieldSpec,
};
use crate::scan::{growth_heatmap, render_escape, scan_parameters, Plane, Region, ScanConfig};
use crate::{Error, Result};

pub use output::{escape_color, format_f64, growth_color, to_json, write_csv, CSV_HEADER};
pub use parse::{parse_coefficients, parse_complex, parse_field, parse_map, parse_path};

pub const WORKERS_ENV: &str = "CRITORBIT_WORKERS";
/// Escape radius for orbits of maps other than `z^d + c`.
pub const GENERAL_ESCAPE_RADIUS: f64 = 1e8;

#[derive(Parser, Debug, Clone)]
#[command(name = "critorbit", version, about = "Critical-orbit series and perturbation obstructions for rational maps")]
pub struct CommandSpec {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Critical orbit with its derivative cocycle
    #[command(args_override_self = true)]
    Orbit {
        #[command(flatten)]
        orbit: OrbitArgs,
        /// Number of orbit steps
        #[arg(long, default_value_t = 200)]
        n_max: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Summability evidence for the critical orbit
    #[command(args_override_self = true)]
    Summability {
        #[command(flatten)]
        orbit: OrbitArgs,
        #[arg(long, default_value_t = 2000)]
        n_max: usize,
        /// Tail window; default is a quarter of the orbit, at most 64
        #[arg(long)]
        window: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The functional mu(v) along the critical orbit
    #[command(args_override_self = true)]
    Mu {
        #[command(flatten)]
        orbit: OrbitArgs,
        #[command(flatten)]
        series: SeriesArgs,
        /// Vector field, a sum of monomials such as "1 - 0.5*z^2"
        #[arg(long, default_value = "1")]
        field: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Moments mu(z^j) for j = 0..=degree
    #[command(args_override_self = true)]
    Moments {
        #[command(flatten)]
        orbit: OrbitArgs,
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Unit-norm polynomial field maximizing |mu|
    #[command(args_override_self = true)]
    Witness {
        #[command(flatten)]
        orbit: OrbitArgs,
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Obstruction sequence b_n and its growth exponent
    #[command(args_override_self = true)]
    Obstruction {
        #[command(flatten)]
        orbit: OrbitArgs,
        #[arg(long, default_value = "1")]
        field: String,
        /// Number of terms
        #[arg(long, default_value_t = 200)]
        terms: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Periodic cycles found by Newton's method from a seed grid
    #[command(args_override_self = true)]
    Cycles {
        #[arg(long)]
        map: String,
        #[command(flatten)]
        search: CycleSearchArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Solves v = alpha o R - DR alpha on cycles
    #[command(args_override_self = true)]
    Alpha {
        #[arg(long)]
        map: String,
        #[arg(long, default_value = "1")]
        field: String,
        #[command(flatten)]
        search: CycleSearchArgs,
        /// Use only the cycle through this point (refined by Newton)
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Continues a repelling cycle along R + lambda v
    #[command(args_override_self = true)]
    Continue {
        #[command(flatten)]
        cycle: CycleArgs,
        #[arg(long, default_value = "1")]
        field: String,
        /// Target lambda
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compares alpha with the finite-difference velocity of the cycle
    #[command(name = "check-motion", args_override_self = true)]
    CheckMotion {
        #[command(flatten)]
        cycle: CycleArgs,
        #[arg(long, default_value = "1")]
        field: String,
        /// Finite-difference step
        #[arg(long, default_value_t = 1e-4)]
        h: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Parameter sweep over z^d + c (CSV by default)
    #[command(args_override_self = true)]
    Scan {
        #[command(flatten)]
        region: RegionArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Escape-time or growth-exponent image (PPM by default)
    #[command(args_override_self = true)]
    Render {
        #[command(flatten)]
        region: RegionArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_enum, default_value_t = RenderKind::Escape)]
        kind: RenderKind,
        #[arg(long, default_value_t = 256)]
        max_iter: u32,
        /// Dynamical plane of z^d + c for this c instead of the parameter plane
        #[arg(long, allow_hyphen_values = true)]
        julia: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output file; standard output if absent
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Output format; json except csv for scan and ppm for render
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Flat key = value file of default flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct OrbitArgs {
    /// Map, e.g. "unicritical:2,-2+0i" or "rational:0,0,1/1"
    #[arg(long)]
    pub map: String,
    /// Index into the map's critical points
    #[arg(long, default_value_t = 0)]
    pub critical: usize,
    /// Escape radius; automatic if absent
    #[arg(long)]
    pub escape_radius: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct SeriesArgs {
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 2000)]
    pub n_max: usize,
}

#[derive(Args, Debug, Clone)]
pub struct CycleSearchArgs {
    #[arg(long)]
    pub period: usize,
    /// Seeds per side of the square seed grid
    #[arg(long, default_value_t = 40)]
    pub seeds: usize,
    /// Half-width of the seed grid
    #[arg(long, default_value_t = 2.5)]
    pub radius: f64,
    /// Relative residual accepted for a cycle
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Args, Debug, Clone)]
pub struct CycleArgs {
    #[arg(long)]
    pub map: String,
    #[arg(long)]
    pub period: usize,
    /// Point near the cycle, refined by Newton's method
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
}

#[derive(Args, Debug, Clone)]
pub struct RegionArgs {
    /// Degree d of z^d + c
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long, default_value_t = -2.5, allow_hyphen_values = true)]
    pub re_min: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub re_max: f64,
    #[arg(long, default_value_t = -1.5, allow_hyphen_values = true)]
    pub im_min: f64,
    #[arg(long, default_value_t = 1.5, allow_hyphen_values = true)]
    pub im_max: f64,
    #[arg(long, default_value_t = 64)]
    pub nx: usize,
    #[arg(long, default_value_t = 64)]
    pub ny: usize,
    /// Semicolon-separated parameters; replaces the rectangle
    #[arg(long, allow_hyphen_values = true)]
    pub path: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 256)]
    pub orbit_length: usize,
    #[arg(long, default_value = "1")]
    pub field: String,
    /// Escape radius; automatic per parameter if absent
    #[arg(long)]
    pub escape_radius: Option<f64>,
    /// Worker threads; defaults to $CRITORBIT_WORKERS or the core count
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Ppm,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderKind {
    /// Escape-time counts
    Escape,
    /// Obstruction growth exponents
    Growth,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentsOutput {
    pub moments: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessOutput {
    pub moments: Vec<Complex64>,
    pub field: VectorFieldSpec,
    pub value: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaEntry {
    pub cycle: Cycle,
    pub solution: Option<CycleAlphaSolution>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MotionCheckOutput {
    pub cycle: Cycle,
    pub alpha: Complex64,
    pub fd_velocity: Complex64,
    pub discrepancy: f64,
}

/// A failure of the command layer, carrying its exit code.
#[derive(Debug)]
enum Failure {
    Domain(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Usage(m) => m,
        }
    }
}

/// Parses `args` (program name first), applies any `--config` file and
/// runs the command. Returns the process exit code.
pub fn main_with_args<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    match CommandSpec::try_parse_from(&args) {
        Ok(spec) => run_command(spec, stdout, stderr),
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{text}");
            code
        }
    }
}

/// Runs a parsed command, writing results to its output target.
pub fn run_command(spec: CommandSpec, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match execute(&spec.command) {
        Ok((bytes, target)) => {
            let written = match target {
                Some(path) => fs::write(&path, &bytes).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => stdout.write_all(&bytes).and_then(|_| stdout.flush()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    1
                }
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.code()
        }
    }
}

/// Inserts the `key = value` pairs of a `--config` file right after the
/// subcommand name.
fn expand_config(mut args: Vec<String>) -> Result<Vec<String>> {
    let mut path = None;
    let mut i = 2;
    while i < args.len() {
        if args[i] == "--config" {
            path = args.get(i + 1).cloned();
            break;
        }
        if let Some(p) = args[i].strip_prefix("--config=") {
            path = Some(p.to_string());
            break;
        }
        i += 1;
    }
    let Some(path) = path else { return Ok(args) };
    let text = fs::read_to_string(&path).map_err(|e| Error::InvalidInput(format!("cannot read config {path}: {e}")))?;
    let mut extra = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse { position: lineno + 1, message: format!("{path}: expected key = value") });
        };
        let key = key.trim().replace('_', "-");
        if key == "config" {
            return Err(Error::Parse { position: lineno + 1, message: format!("{path}: nested config") });
        }
        extra.push(format!("--{key}={}", value.trim()));
    }
    let at = 2.min(args.len());
    args.splice(at..at, extra);
    Ok(args)
}

type Output = (Vec<u8>, Option<PathBuf>);

fn execute(command: &Command) -> std::result::Result<Output, Failure> {
    match command {
        Command::Orbit { orbit, n_max, out } => {
            let record = load_orbit(orbit, *n_max)?;
            json_only(&record, out)
        }
        Command::Summability { orbit, n_max, window, out } => {
            let record = load_orbit(orbit, *n_max)?;
            let window = window.unwrap_or_else(|| (record.points.len() / 4).clamp(1, 64));
            json_only(&summability_report(&record, window)?, out)
        }
        Command::Mu { orbit, series, field, out } => {
            let record = load_orbit(orbit, series.n_max)?;
            let v = parse_field(field)?;
            json_only(&mu_functional(&record, &v, series.tol, series.n_max)?, out)
        }
        Command::Moments { orbit, series, degree, out } => {
            let record = load_orbit(orbit, series.n_max)?;
            json_only(&MomentsOutput { moments: moment_vector(&record, *degree, series.tol)? }, out)
        }
        Command::Witness { orbit, series, degree, out } => {
            let record = load_orbit(orbit, series.n_max)?;
            let moments = moment_vector(&record, *degree, series.tol)?;
            let (field, value) = find_witness_field(&moments)?;
            json_only(&WitnessOutput { moments, field, value }, out)
        }
        Command::Obstruction { orbit, field, terms, out } => {
            let record = load_orbit(orbit, *terms)?;
            let v = parse_field(field)?;
            json_only(&obstruction_sequence(&record, &v, *terms)?, out)
        }
        Command::Cycles { map, search, out } => {
            let map = parse_map(map)?;
            json_only(&search_cycles(&map, search)?, out)
        }
        Command::Alpha { map, field, search, point, out } => {
            let map = parse_map(map)?;
            let v = parse_field(field)?;
            let entries = match point {
                Some(p) => {
                    let cycle = refine_cycle(&map, parse_complex(p)?, search.period)?;
                    let solution = solve_alpha_on_cycle(&map, &cycle, &v)?;
                    vec![AlphaEntry { cycle, solution: Some(solution), error: None }]
                }
                None => search_cycles(&map, search)?
                    .into_iter()
                    .map(|cycle| match solve_alpha_on_cycle(&map, &cycle, &v) {
                        Ok(s) => AlphaEntry { cycle, solution: Some(s), error: None },
                        Err(e) => AlphaEntry { cycle, solution: None, error: Some(e.to_string()) },
                    })
                    .collect(),
            };
            json_only(&entries, out)
        }
        Command::Continue { cycle, field, target, steps, out } => {
            let map = parse_map(&cycle.map)?;
            let v = parse_field(field)?;
            let start = refine_cycle(&map, parse_complex(&cycle.point)?, cycle.period)?;
            let target = parse_complex(target)?;
            json_only(&continue_cycle(&map, &v, &start, target, *steps)?, out)
        }
        Command::CheckMotion { cycle, field, h, out } => {
            let map = parse_map(&cycle.map)?;
            let v = parse_field(field)?;
            let start = refine_cycle(&map, parse_complex(&cycle.point)?, cycle.period)?;
            let (alpha, fd_velocity, discrepancy) = motion_velocity_check(&map, &v, &start, *h)?;
            json_only(&MotionCheckOutput { cycle: start, alpha, fd_velocity, discrepancy }, out)
        }
        Command::Scan { region, sweep, out } => {
            let config = scan_config(region, sweep, Plane::Parameter)?;
            let rows = scan_parameters(&config)?;
            match out.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_csv(&rows, &mut buf).map_err(|e| Failure::Domain(e.to_string()))?;
                    Ok((buf, out.output.clone()))
                }
                Format::Json => json(&rows, out),
                Format::Ppm => Err(Failure::Usage("scan writes csv or json".into())),
            }
        }
        Command::Render { region, sweep, kind, max_iter, julia, out } => {
            let plane = match julia {
                Some(c) => Plane::Dynamical { c: parse_complex(c)? },
                None => Plane::Parameter,
            };
            let config = scan_config(region, sweep, plane)?;
            let format = out.format.unwrap_or(Format::Ppm);
            if format == Format::Csv {
                return Err(Failure::Usage("render writes ppm or json".into()));
            }
            match kind {
                RenderKind::Escape => {
                    let image = render_escape(&config, *max_iter)?;
                    match format {
                        Format::Json => json(&image, out),
                        _ => Ok((output::escape_ppm(&image), out.output.clone())),
                    }
                }
                RenderKind::Growth => {
                    if config.plane != Plane::Parameter {
                        return Err(Failure::Usage("growth images live in the parameter plane".into()));
                    }
                    let rows = scan_parameters(&config)?;
                    let heatmap = growth_heatmap(&rows, &config)?;
                    match format {
                        Format::Json => json(&heatmap, out),
                        _ => Ok((output::heatmap_ppm(&heatmap, &rows), out.output.clone())),
                    }
                }
            }
        }
    }
}

fn json<T: Serialize + ?Sized>(value: &T, out: &OutputArgs) -> std::result::Result<Output, Failure> {
    let mut text = to_json(value).map_err(|e| Failure::Domain(e.to_string()))?;
    text.push('\n');
    Ok((text.into_bytes(), out.output.clone()))
}

fn json_only<T: Serialize + ?Sized>(value: &T, out: &OutputArgs) -> std::result::Result<Output, Failure> {
    match out.format {
        None | Some(Format::Json) => json(value, out),
        Some(_) => Err(Failure::Usage("this command writes json only".into())),
    }
}

fn load_orbit(args: &OrbitArgs, n_max: usize) -> Result<OrbitRecord> {
    let map = parse_map(&args.map)?;
    let cps = map.critical_points();
    let &cp = cps.get(args.critical).ok_or_else(|| {
        Error::InvalidInput(format!("critical index {} out of range ({} critical points)", args.critical, cps.len()))
    })?;
    let radius = args.escape_radius.unwrap_or(match map.form() {
        MapForm::Unicritical { d, c } => default_escape_radius(c, d),
        MapForm::Rational => GENERAL_ESCAPE_RADIUS,
    });
    let record = trace_orbit(&map, cp, n_max, radius)?;
    if let Some(index) = record.critical_relation {
        return Err(Error::CriticalRelation { index, critical_point: cp });
    }
    Ok(record)
}

fn search_cycles(map: &MapSpec, search: &CycleSearchArgs) -> Result<Vec<Cycle>> {
    if search.period == 0 || search.seeds == 0 {
        return Err(Error::InvalidInput("period and seeds must be >= 1".into()));
    }
    find_cycles(map, search.period, &grid_seeds(search.radius, search.seeds), search.tol)
}

fn refine_cycle(map: &MapSpec, point: Complex64, period: usize) -> Result<Cycle> {
    if period == 0 {
        return Err(Error::InvalidInput("period must be >= 1".into()));
    }
    let p = newton_periodic(map, point, period)
        .ok_or_else(|| Error::InvalidCycle(format!("Newton's method from {point} does not converge")))?;
    Cycle::from_point(map, p, period)
}

fn scan_config(region: &RegionArgs, sweep: &SweepArgs, plane: Plane) -> Result<ScanConfig> {
    let region_spec = match &region.path {
        Some(p) => Region::Path(parse_path(p)?),
        None => Region::Rect { re_min: region.re_min, re_max: region.re_max, im_min: region.im_min, im_max: region.im_max },
    };
    let config = ScanConfig {
        region: region_spec,
        d: region.d,
        resolution: (region.nx, region.ny),
        orbit_length: sweep.orbit_length,
        field: parse_field(&sweep.field)?,
        escape_radius: sweep.escape_radius,
        worker_count: match sweep.workers {
            Some(w) => w,
            None => default_workers()?,
        },
        plane,
    };
    config.validate()?;
    Ok(config)
}

fn default_workers() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(text) => text
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&w| w >= 1)
            .ok_or_else(|| Error::InvalidInput(format!("{WORKERS_ENV} must be a positive integer, got '{text}'"))),
        Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("critorbit").chain(args.iter().copied());
        let code = main_with_args(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn config_is_inserted_after_the_subcommand() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.conf");
        fs::write(&path, "# defaults\nn_max = 7\nmap=unicritical:2,-2+0i\n").unwrap();
        let args: Vec<String> = ["critorbit", "orbit", "--config", path.to_str().unwrap(), "--n-max", "9"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let expanded = expand_config(args).unwrap();
        assert_eq!(&expanded[..4], &["critorbit", "orbit", "--n-max=7", "--map=unicritical:2,-2+0i"]);
        let spec = CommandSpec::try_parse_from(&expanded).unwrap();
        let Command::Orbit { n_max, .. } = spec.command else { panic!() };
        assert_eq!(n_max, 9);
    }

    #[test]
    fn bad_config_line_is_a_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.conf");
        fs::write(&path, "n_max 7\n").unwrap();
        let (code, _, err) = run(&["orbit", "--config", path.to_str().unwrap()]);
        assert_eq!(code, 2);
        assert!(err.contains("position 1"));
    }

    #[test]
    fn domain_and_usage_codes() {
        assert_eq!(run(&["mu", "--map", "unicritical:2,-2+0i"]).0, 0);
        // z^2 + 0.1: the critical orbit is attracted, so the series diverges
        assert_eq!(run(&["mu", "--map", "unicritical:2,0.1+0i"]).0, 1);
        assert_eq!(run(&["mu", "--map", "unicritical:2,-2+0i", "--field", "z^"]).0, 2);
        assert_eq!(run(&["mu", "--map", "unicritical:2,-2+0i", "--format", "csv"]).0, 2);
        assert_eq!(run(&["orbit", "--map", "unicritical:2,-2+0i", "--critical", "3"]).0, 2);
        assert_eq!(run(&["scan", "--nx", "0"]).0, 2);
    }
}
