//! Command-line front end for `fermi_scope`: reads a JSON run configuration,
//! runs one analysis and writes CSV/SVG artifacts plus a one-line JSON summary.

pub mod config;
pub mod output;
pub mod svg;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use fermi_scope::capacity::{capacity_bounds_report, quantum_blob_inside, verify_blob};
use fermi_scope::gaussian::SqueezedState;
use fermi_scope::numerical::{
    compare_fermi_wigner, fermi_field, fermi_operator_residual, wigner_transform, zero_contour, CompareOptions,
    GridWavefunction, LevelComparison, PhaseSpaceField, Polyline, PolarMode, PolarOptions,
};
use fermi_scope::oscillator::OscillatorEigenstate;
use serde_json::{json, Value};

pub use config::{Command, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "FERMI_SCOPE_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o failure: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Io(_) => EXIT_IO,
        }
    }

    pub fn from_core(field: &str, e: fermi_scope::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(format!("{field}: {e}"))
        } else {
            CliError::Validation(format!("{field}: {e}"))
        }
    }
}

/// Reads the configuration from a path, or standard input for `-`.
pub fn load_config(source: &Path) -> Result<RunConfig, CliError> {
    let (text, base) = if source == Path::new("-") {
        let text = std::io::read_to_string(std::io::stdin())
            .map_err(|e| CliError::Validation(format!("config: cannot read standard input: {e}")))?;
        (text, PathBuf::from("."))
    } else {
        let text = std::fs::read_to_string(source)
            .map_err(|e| CliError::Validation(format!("config: cannot read {}: {e}", source.display())))?;
        let base = source.parent().map(Path::to_path_buf).unwrap_or_default();
        (text, base)
    };
    config::parse(&text, &base)
}

/// Sizes the global worker pool from [`THREADS_ENV`] when set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Validation(format!("{THREADS_ENV}: expected a positive integer, got {raw:?}")))?;
    // a pool that already exists keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Runs one command, writing artifacts into `out_dir`, and returns the summary.
pub fn run(command: Command, config: &RunConfig, out_dir: &Path) -> Result<Value, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    let mut summary = match command {
        Command::Capacity => capacity(config)?,
        Command::Oscillator => oscillator(config)?,
        Command::Fermi => fermi(config, out_dir)?,
        Command::Wigner => wigner(config, out_dir)?,
        Command::Residual => residual(config)?,
        Command::Compare => compare(config, out_dir)?,
    };
    summary["command"] = json!(command.name());
    Ok(summary)
}

fn squeezed_state(config: &RunConfig) -> Result<Option<SqueezedState>, CliError> {
    match &config.state {
        config::StateSpec::Squeezed { x, y } => SqueezedState::from_rows(x, y, config.hbar)
            .map(Some)
            .map_err(|e| CliError::from_core("state.squeezed", e)),
        _ => Ok(None),
    }
}

fn oscillator_state(config: &RunConfig) -> Result<Option<OscillatorEigenstate>, CliError> {
    match &config.state {
        config::StateSpec::Oscillator { indices } => OscillatorEigenstate::new(indices.clone(), config.hbar)
            .map(Some)
            .map_err(|e| CliError::from_core("state.oscillator", e)),
        _ => Ok(None),
    }
}

fn one_dof(field: &str, dof: usize) -> Result<(), CliError> {
    if dof != 1 {
        return Err(CliError::Validation(format!(
            "{field}: sampled analyses need one degree of freedom, got {dof}"
        )));
    }
    Ok(())
}

fn x_grid(config: &RunConfig) -> Result<config::XGrid, CliError> {
    config
        .x_grid
        .ok_or_else(|| CliError::Validation("grid.xMin: required to sample the state".into()))
}

fn p_grid(config: &RunConfig) -> Result<config::PGrid, CliError> {
    config
        .p_grid
        .ok_or_else(|| CliError::Validation("grid.pMin: required for momentum axes".into()))
}

/// `e^{−x²/2ħ} H_N(x/√ħ)` normalized: `‖·‖² = 2^N N! √(πħ)`.
fn hermite_norm(index: usize, hbar: f64) -> f64 {
    let factorial: f64 = (1..=index).map(|k| k as f64).product();
    (2f64.powi(index as i32) * factorial * (PI * hbar).sqrt()).sqrt()
}

fn sampled_wavefunction(config: &RunConfig) -> Result<GridWavefunction, CliError> {
    let sample = |grid: config::XGrid, f: &dyn Fn(f64) -> num_complex::Complex64| {
        GridWavefunction::sample(grid.min, grid.dx(), grid.count, config.hbar, f)
            .map_err(|e| CliError::from_core("grid", e))
    };
    if let Some(state) = squeezed_state(config)? {
        one_dof("state.squeezed.X", state.dof())?;
        return sample(x_grid(config)?, &|x| state.evaluate(&[x]).expect("one coordinate"));
    }
    if let Some(state) = oscillator_state(config)? {
        one_dof("state.oscillator.indices", state.dof())?;
        let norm = hermite_norm(state.indices()[0], config.hbar);
        return sample(x_grid(config)?, &|x| {
            num_complex::Complex64::new(state.value(&[x]).expect("one coordinate") / norm, 0.0)
        });
    }
    match &config.state {
        config::StateSpec::GridFile { path } => output::read_grid_file(path, config.hbar),
        _ => unreachable!("state kinds are exhaustive"),
    }
}

fn polar_options(config: &RunConfig) -> PolarOptions {
    let mode = match config.polar_mode {
        Some(config::RawPolarMode::Modulus) => PolarMode::Modulus,
        Some(config::RawPolarMode::Signed) => PolarMode::SignedReal,
        Some(config::RawPolarMode::Auto) => PolarMode::Auto,
        // real eigenfunctions change sign at their nodes
        None if matches!(config.state, config::StateSpec::Oscillator { .. }) => PolarMode::SignedReal,
        None => PolarMode::Modulus,
    };
    let mut opts = PolarOptions::with_mode(mode);
    if let Some(t) = config.node_threshold {
        opts.node_threshold = t;
    }
    opts
}

type PhaseSpaceFn = Box<dyn Fn(f64, f64) -> f64>;

/// Closed-form phase-space function for the exact state kinds.
fn exact_fermi(config: &RunConfig) -> Result<Option<PhaseSpaceFn>, CliError> {
    if let Some(s) = squeezed_state(config)? {
        return Ok(Some(Box::new(move |x, p| s.fermi_value(&[x, p]).expect("one dof"))));
    }
    if let Some(s) = oscillator_state(config)? {
        return Ok(Some(Box::new(move |x, p| s.fermi_value(&[x, p]).expect("one dof"))));
    }
    Ok(None)
}

fn max_deviation(field: &PhaseSpaceField, exact: &dyn Fn(f64, f64) -> f64) -> f64 {
    let (nx, np) = field.shape();
    let mut worst = 0.0_f64;
    for i in 0..nx {
        for j in 0..np {
            if !field.is_masked(i, j) {
                let want = exact(field.x_axis.value(i), field.p_axis.value(j));
                worst = worst.max((field.value(i, j) - want).abs());
            }
        }
    }
    worst
}

fn largest_area(lines: &[Polyline]) -> f64 {
    lines.iter().map(Polyline::area).fold(0.0, f64::max)
}

fn capacity(config: &RunConfig) -> Result<Value, CliError> {
    let state = squeezed_state(config)?
        .ok_or_else(|| CliError::Validation("state: the capacity command needs a squeezed state".into()))?;
    let bounds = capacity_bounds_report(&state);
    let blob = quantum_blob_inside(&state).map_err(|e| CliError::from_core("state.squeezed", e))?;
    let check =
        verify_blob(&state, &blob, config.blob_samples).map_err(|e| CliError::from_core("blobSamples", e))?;
    Ok(json!({
        "dof": state.dof(),
        "hbar": state.hbar(),
        "capacity": bounds.capacity,
        "lower": bounds.lower,
        "upper": bounds.upper,
        "withinBounds": bounds.within_bounds,
        "blobCapacity": check.blob_capacity,
        "blobMaxFermiValue": check.max_fermi_value,
        "blobSamples": check.samples,
    }))
}

fn oscillator(config: &RunConfig) -> Result<Value, CliError> {
    let state = oscillator_state(config)?
        .ok_or_else(|| CliError::Validation("state: the oscillator command needs an oscillator state".into()))?;
    let capacity = state.fermi_ball().capacity().map_err(|e| CliError::from_core("state.oscillator", e))?;
    Ok(json!({
        "indices": state.indices(),
        "hbar": state.hbar(),
        "fermiEnergy": state.fermi_energy(),
        "fermiArea": state.fermi_area(),
        "totalIndexRadiusSquared": state.total_index_radius_squared(),
        "capacity": capacity,
    }))
}

fn fermi(config: &RunConfig, out_dir: &Path) -> Result<Value, CliError> {
    let psi = sampled_wavefunction(config)?;
    let p = p_grid(config)?;
    let field = fermi_field(&psi, p.min, p.max, p.count, &polar_options(config))
        .map_err(|e| CliError::from_core("grid", e))?;
    let contours = zero_contour(&field, 0.0);
    output::write_atomic(out_dir, "fermi_field.csv", &output::fermi_field_csv(&field))?;
    output::write_atomic(out_dir, "fermi_contour.csv", &output::contours_csv(&contours))?;
    let deviation = exact_fermi(config)?.map(|f| max_deviation(&field, &*f));
    Ok(json!({
        "xCount": psi.len(),
        "pCount": p.count,
        "dx": psi.dx(),
        "dp": field.p_axis.step,
        "maskedFraction": field.masked_fraction(),
        "contours": contours.len(),
        "fermiArea": largest_area(&contours),
        "closedFormMaxDeviation": deviation,
    }))
}

fn wigner(config: &RunConfig, out_dir: &Path) -> Result<Value, CliError> {
    let psi = sampled_wavefunction(config)?;
    let field = wigner_transform(&psi).map_err(|e| CliError::from_core("grid", e))?;
    let (peak, peak_x, peak_p) = field.max_unmasked().expect("Wigner fields are unmasked");
    let min = field.values().iter().copied().fold(f64::INFINITY, f64::min);
    let deviation = match squeezed_state(config)? {
        Some(s) => {
            let exact = |x: f64, p: f64| s.wigner_value(&[x, p]).expect("one dof");
            Some(max_deviation(&field, &exact))
        }
        None => None,
    };
    let written = match config.p_grid {
        Some(p) => field.crop_p(p.min, p.max).map_err(|e| CliError::from_core("grid.pMin", e))?,
        None => field.clone(),
    };
    output::write_atomic(out_dir, "wigner_field.csv", &output::wigner_field_csv(&written))?;
    Ok(json!({
        "xCount": psi.len(),
        "dx": psi.dx(),
        "dp": field.p_axis.step,
        "peak": peak,
        "peakX": peak_x,
        "peakP": peak_p,
        "min": min,
        "integral": field.integral(),
        "closedFormMaxDeviation": deviation,
    }))
}

fn residual(config: &RunConfig) -> Result<Value, CliError> {
    let psi = sampled_wavefunction(config)?;
    let r = fermi_operator_residual(&psi, &polar_options(config)).map_err(|e| CliError::from_core("grid", e))?;
    Ok(json!({
        "xCount": psi.len(),
        "dx": psi.dx(),
        "residual": r.relative,
        "trivialResidual": r.trivial_relative,
        "points": r.points,
    }))
}

fn level_json(level: &LevelComparison, first_id: usize) -> Value {
    json!({
        "fraction": level.fraction,
        "level": level.level,
        "meanRadialDistance": level.mean_radial_distance,
        "symmetricAreaDifference": level.symmetric_area_difference,
        "enclosedArea": level.enclosed_area,
        "firstContourId": first_id,
        "contourCount": level.contours.len(),
    })
}

fn compare(config: &RunConfig, out_dir: &Path) -> Result<Value, CliError> {
    let psi = sampled_wavefunction(config)?;
    let p = p_grid(config)?;
    let mut opts = CompareOptions::new(config.fractions.clone(), p.min, p.max, p.count);
    opts.polar = polar_options(config);
    if let Some(s) = squeezed_state(config)? {
        opts.predicted_fraction = Some((-s.trace_x()).exp());
    }
    let report = compare_fermi_wigner(&psi, &opts).map_err(|e| CliError::from_core("wignerLevelFractions", e))?;

    let all: Vec<&LevelComparison> = report.levels.iter().chain(report.predicted.iter()).collect();
    let mut first_ids = Vec::with_capacity(all.len());
    let mut next = 0;
    for level in &all {
        first_ids.push(next);
        next += level.contours.len();
    }
    output::write_atomic(out_dir, "fermi_contour.csv", &output::contours_csv(&report.fermi_contours))?;
    output::write_atomic(
        out_dir,
        "wigner_contours.csv",
        &output::contours_csv(all.iter().flat_map(|l| l.contours.iter())),
    )?;
    let x_range = (psi.x_min(), psi.x(psi.len() - 1));
    let plot = svg::comparison_svg(&report.fermi_contours, &all, x_range, (p.min, p.max));
    output::write_atomic(out_dir, "compare.svg", plot.as_bytes())?;

    let levels: Vec<Value> = report
        .levels
        .iter()
        .zip(&first_ids)
        .map(|(l, id)| level_json(l, *id))
        .collect();
    let predicted = report.predicted.as_ref().map(|l| level_json(l, first_ids[all.len() - 1]));
    Ok(json!({
        "xCount": psi.len(),
        "pCount": p.count,
        "spacing": report.spacing,
        "centroid": report.centroid,
        "fermiArea": report.fermi_area,
        "wignerPeak": report.wigner_peak,
        "fermiSurfaceWignerFraction": report.fermi_surface_wigner_fraction,
        "levels": levels,
        "predicted": predicted,
    }))
}
