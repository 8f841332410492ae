use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Capacity,
    Fermi,
    Wigner,
    Oscillator,
    Residual,
    Compare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Capacity => "capacity",
            Command::Fermi => "fermi",
            Command::Wigner => "wigner",
            Command::Oscillator => "oscillator",
            Command::Residual => "residual",
            Command::Compare => "compare",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RawConfig {
    pub state: RawState,
    #[serde(default = "default_hbar")]
    pub hbar: f64,
    #[serde(default)]
    pub grid: RawGrid,
    #[serde(default)]
    pub wigner_level_fractions: Option<Vec<f64>>,
    #[serde(default)]
    pub polar_mode: Option<RawPolarMode>,
    #[serde(default)]
    pub node_threshold: Option<f64>,
    #[serde(default)]
    pub blob_samples: Option<usize>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

fn default_hbar() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawState {
    pub squeezed: Option<RawSqueezed>,
    pub oscillator: Option<RawOscillator>,
    pub grid: Option<RawGridFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSqueezed {
    pub n: Option<usize>,
    #[serde(rename = "X")]
    pub x: Vec<Vec<f64>>,
    #[serde(rename = "Y")]
    pub y: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOscillator {
    pub indices: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGridFile {
    pub path: PathBuf,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RawGrid {
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub x_count: Option<usize>,
    pub p_min: Option<f64>,
    pub p_max: Option<f64>,
    pub p_count: Option<usize>,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub enum RawPolarMode {
    Modulus,
    Signed,
    Auto,
}

#[derive(Clone, Debug)]
pub enum StateSpec {
    Squeezed { x: Vec<Vec<f64>>, y: Vec<Vec<f64>> },
    Oscillator { indices: Vec<usize> },
    GridFile { path: PathBuf },
}

#[derive(Clone, Copy, Debug)]
pub struct XGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl XGrid {
    /// Samples at `min + k·dx`, `dx = (max − min)/count`; `max` itself is excluded.
    pub fn dx(&self) -> f64 {
        (self.max - self.min) / self.count as f64
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub state: StateSpec,
    pub hbar: f64,
    pub x_grid: Option<XGrid>,
    pub p_grid: Option<PGrid>,
    pub fractions: Vec<f64>,
    pub polar_mode: Option<RawPolarMode>,
    pub node_threshold: Option<f64>,
    pub blob_samples: usize,
    pub out_dir: Option<PathBuf>,
}

pub const MIN_COUNT: usize = 16;
/// `0.5, e^{-1}, 0.1`.
pub const DEFAULT_FRACTIONS: [f64; 3] = [0.5, 0.36787944117144233, 0.1];

pub fn parse(text: &str, base_dir: &Path) -> Result<RunConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { "config".to_string() } else { path };
        CliError::Validation(format!("{field}: {}", e.inner()))
    })?;
    validate(raw, base_dir)
}

fn invalid(field: &str, message: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{field}: {message}"))
}

fn validate(raw: RawConfig, base_dir: &Path) -> Result<RunConfig, CliError> {
    if !(raw.hbar > 0.0 && raw.hbar.is_finite()) {
        return Err(invalid("hbar", "must be positive and finite"));
    }
    let present = [raw.state.squeezed.is_some(), raw.state.oscillator.is_some(), raw.state.grid.is_some()];
    if present.iter().filter(|p| **p).count() != 1 {
        return Err(invalid("state", "exactly one of squeezed, oscillator or grid is required"));
    }
    let state = if let Some(sq) = raw.state.squeezed {
        let n = sq.x.len();
        if n == 0 {
            return Err(invalid("state.squeezed.X", "must be a non-empty square matrix"));
        }
        if let Some(declared) = sq.n {
            if declared != n {
                return Err(invalid("state.squeezed.n", format!("is {declared} but X has {n} rows")));
            }
        }
        let y = sq.y.unwrap_or_else(|| vec![vec![0.0; n]; n]);
        for (name, m) in [("state.squeezed.X", &sq.x), ("state.squeezed.Y", &y)] {
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                return Err(invalid(name, format!("must be {n}x{n}")));
            }
        }
        StateSpec::Squeezed { x: sq.x, y }
    } else if let Some(osc) = raw.state.oscillator {
        if osc.indices.is_empty() {
            return Err(invalid("state.oscillator.indices", "must not be empty"));
        }
        StateSpec::Oscillator { indices: osc.indices }
    } else {
        let file = raw.state.grid.expect("one state present");
        let path = if file.path.is_absolute() { file.path } else { base_dir.join(file.path) };
        StateSpec::GridFile { path }
    };

    let g = raw.grid;
    let x_grid = match (g.x_min, g.x_max, g.x_count) {
        (None, None, None) => None,
        (Some(min), Some(max), Some(count)) => {
            if !(min.is_finite() && max.is_finite() && max > min) {
                return Err(invalid("grid.xMax", "must exceed grid.xMin"));
            }
            if count < MIN_COUNT {
                return Err(invalid("grid.xCount", format!("must be at least {MIN_COUNT}")));
            }
            Some(XGrid { min, max, count })
        }
        (None, _, _) => return Err(invalid("grid.xMin", "missing")),
        (_, None, _) => return Err(invalid("grid.xMax", "missing")),
        (_, _, None) => return Err(invalid("grid.xCount", "missing")),
    };
    let p_grid = match (g.p_min, g.p_max, g.p_count) {
        (None, None, None) => None,
        (Some(min), Some(max), Some(count)) => {
            if !(min.is_finite() && max.is_finite() && max > min) {
                return Err(invalid("grid.pMax", "must exceed grid.pMin"));
            }
            if count < MIN_COUNT {
                return Err(invalid("grid.pCount", format!("must be at least {MIN_COUNT}")));
            }
            Some(PGrid { min, max, count })
        }
        (None, _, _) => return Err(invalid("grid.pMin", "missing")),
        (_, None, _) => return Err(invalid("grid.pMax", "missing")),
        (_, _, None) => return Err(invalid("grid.pCount", "missing")),
    };

    let fractions = raw.wigner_level_fractions.unwrap_or_else(|| DEFAULT_FRACTIONS.to_vec());
    if fractions.iter().any(|f| !(*f > 0.0 && *f < 1.0)) {
        return Err(invalid("wignerLevelFractions", "each fraction must lie in (0, 1)"));
    }
    if let Some(t) = raw.node_threshold {
        if !(0.0..1.0).contains(&t) {
            return Err(invalid("nodeThreshold", "must lie in [0, 1)"));
        }
    }
    let blob_samples = raw.blob_samples.unwrap_or(fermi_scope::capacity::DEFAULT_BLOB_SAMPLES);
    if blob_samples == 0 {
        return Err(invalid("blobSamples", "must be positive"));
    }
    Ok(RunConfig {
        state,
        hbar: raw.hbar,
        x_grid,
        p_grid,
        fractions,
        polar_mode: raw.polar_mode,
        node_threshold: raw.node_threshold,
        blob_samples,
        out_dir: raw.out_dir,
    })
}
