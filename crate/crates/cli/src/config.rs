//! Scenario configuration files.
//!
//! ```json
//! {
//!   "scenario": "swap_cooling",
//!   "parameters": {"deltaE_A": 1.0, "deltaE_B": 2.0, "g": 0.1, "beta_i": 1.0},
//!   "grid": {"t0": 0.0, "t1": 31.41592653589793, "n_steps": 2048},
//!   "frame": "rwa",
//!   "basis": "energy",
//!   "output": "swap.csv"
//! }
//! ```
//!
//! `grid`, `frame` (default `rwa`), `basis` (default `energy`) and `output`
//! are optional. `basis` may also be a list of basis vectors, each a list of
//! `[re, im]` pairs. `swap_cooling` accepts `"subsystem": "A" | "AB"`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use lembas::dynamics::{RunOptions, TimeGrid, Trajectory};
use lembas::lembas::MeasurementBasis;
use lembas::scenarios::{self, DrivenTlsConfig, Frame, SwapConfig, SwapView};
use num_complex::Complex;
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: String,
    parameters: BTreeMap<String, f64>,
    #[serde(default)]
    grid: Option<RawGrid>,
    #[serde(default)]
    frame: Option<RawFrame>,
    #[serde(default)]
    basis: Option<RawBasis>,
    #[serde(default)]
    output: Option<PathBuf>,
    #[serde(default)]
    subsystem: Option<RawSubsystem>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    t0: f64,
    t1: f64,
    n_steps: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawFrame {
    Lab,
    Rwa,
}

#[derive(Debug, Clone, Copy, Deserialize)]
enum RawSubsystem {
    A,
    AB,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawBasis {
    Named(String),
    Vectors(Vec<Vec<[f64; 2]>>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    DrivenTls(DrivenTlsConfig),
    Swap(SwapConfig, SwapView),
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: Scenario,
    name: String,
    parameters: BTreeMap<String, f64>,
    frame: Frame,
    view: SwapView,
    grid: Option<RawGrid>,
    basis: Option<Vec<Vec<Complex<f64>>>>,
    pub output: Option<PathBuf>,
}

const TLS_KEYS: &[&str] = &["deltaE", "g", "omega", "delta", "beta"];
const SWAP_KEYS: &[&str] = &["deltaE_A", "deltaE_B", "g", "beta_i"];

fn schema(scenario: &str) -> Option<&'static [&'static str]> {
    match scenario {
        "driven_tls" => Some(TLS_KEYS),
        "swap_cooling" => Some(SWAP_KEYS),
        _ => None,
    }
}

fn required(params: &BTreeMap<String, f64>, key: &str) -> Result<f64, ConfigError> {
    params
        .get(key)
        .copied()
        .ok_or_else(|| ConfigError::new(format!("parameters.{key}"), "missing required parameter"))
}

fn build_scenario(name: &str, params: &BTreeMap<String, f64>, frame: Frame, view: SwapView) -> Result<Scenario, ConfigError> {
    let keys = schema(name).ok_or_else(|| {
        ConfigError::new(
            "scenario",
            format!("unknown scenario {name:?} (expected one of {})", scenarios::SCENARIOS.join(", ")),
        )
    })?;
    if let Some(unknown) = params.keys().find(|k| !keys.contains(&k.as_str())) {
        return Err(ConfigError::new(
            format!("parameters.{unknown}"),
            format!("unknown parameter for {name} (expected {})", keys.join(", ")),
        ));
    }
    let scenario = match name {
        "driven_tls" => {
            let delta_e = required(params, "deltaE")?;
            let omega = match (params.get("omega"), params.get("delta")) {
                (Some(_), Some(_)) => {
                    return Err(ConfigError::new("parameters.delta", "give either omega or delta, not both"))
                }
                (Some(&w), None) => w,
                (None, Some(&d)) => delta_e + d,
                (None, None) => return Err(ConfigError::new("parameters.omega", "missing required parameter (or delta)")),
            };
            let cfg = DrivenTlsConfig {
                delta_e,
                g: required(params, "g")?,
                omega,
                beta: required(params, "beta")?,
                frame,
            };
            cfg.validate().map_err(|e| ConfigError::new("parameters", e.to_string()))?;
            Scenario::DrivenTls(cfg)
        }
        _ => {
            let cfg = SwapConfig {
                delta_e_a: required(params, "deltaE_A")?,
                delta_e_b: required(params, "deltaE_B")?,
                g: required(params, "g")?,
                beta_i: required(params, "beta_i")?,
                frame,
            };
            cfg.validate().map_err(|e| ConfigError::new("parameters", e.to_string()))?;
            Scenario::Swap(cfg, view)
        }
    };
    Ok(scenario)
}

fn convert_basis(raw: RawBasis) -> Result<Option<Vec<Vec<Complex<f64>>>>, ConfigError> {
    match raw {
        RawBasis::Named(s) if s == "energy" => Ok(None),
        RawBasis::Named(s) => Err(ConfigError::new("basis", format!("unknown basis {s:?} (expected \"energy\" or a list of vectors)"))),
        RawBasis::Vectors(v) => Ok(Some(
            v.into_iter()
                .map(|vec| vec.into_iter().map(|[re, im]| Complex::new(re, im)).collect())
                .collect(),
        )),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            ConfigError::new(if path == "." { "config".to_string() } else { path }, e.into_inner().to_string())
        })?;
        let frame = match raw.frame.unwrap_or(RawFrame::Rwa) {
            RawFrame::Lab => Frame::Lab,
            RawFrame::Rwa => Frame::Rwa,
        };
        let view = match raw.subsystem {
            None | Some(RawSubsystem::AB) => SwapView::Ab,
            Some(RawSubsystem::A) => SwapView::A,
        };
        if raw.subsystem.is_some() && raw.scenario != "swap_cooling" {
            return Err(ConfigError::new("subsystem", "only swap_cooling has subsystems"));
        }
        let scenario = build_scenario(&raw.scenario, &raw.parameters, frame, view)?;
        let basis = raw.basis.map(convert_basis).transpose()?.flatten();
        Ok(Self {
            scenario,
            name: raw.scenario,
            parameters: raw.parameters,
            frame,
            view,
            grid: raw.grid,
            basis,
            output: raw.output,
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("config", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Same configuration with one parameter replaced; `delta` and `omega`
    /// replace each other for `driven_tls`.
    pub fn with_parameter(&self, key: &str, value: f64) -> Result<Self, ConfigError> {
        let keys = schema(&self.name).unwrap_or(&[]);
        if !keys.contains(&key) {
            return Err(ConfigError::new(
                format!("--param {key}"),
                format!("not a parameter of {} (expected {})", self.name, keys.join(", ")),
            ));
        }
        let mut params = self.parameters.clone();
        match key {
            "delta" => {
                params.remove("omega");
            }
            "omega" => {
                params.remove("delta");
            }
            _ => {}
        }
        params.insert(key.to_string(), value);
        let scenario = build_scenario(&self.name, &params, self.frame, self.view)?;
        Ok(Self {
            scenario,
            parameters: params,
            ..self.clone()
        })
    }

    pub fn grid(&self) -> lembas::Result<TimeGrid<f64>> {
        let override_steps = lembas::verify::nsteps_override();
        match self.grid {
            Some(g) => TimeGrid::new(g.t0, g.t1, override_steps.unwrap_or(g.n_steps)),
            None => {
                let grid = match self.scenario {
                    Scenario::DrivenTls(cfg) => cfg.default_grid()?,
                    Scenario::Swap(cfg, _) => cfg.default_grid()?,
                };
                match override_steps {
                    Some(n) => grid.with_steps(n),
                    None => Ok(grid),
                }
            }
        }
    }

    fn basis(&self) -> lembas::Result<Option<MeasurementBasis<f64>>> {
        self.basis.as_deref().map(MeasurementBasis::explicit).transpose()
    }

    pub fn run(&self) -> lembas::Result<Trajectory<f64>> {
        let grid = self.grid()?;
        let basis = self.basis()?;
        match self.scenario {
            Scenario::DrivenTls(cfg) => scenarios::run_driven_tls(&cfg, &grid, basis.as_ref(), RunOptions::default()),
            Scenario::Swap(cfg, view) => scenarios::run_swap(&cfg, view, &grid, basis.as_ref(), RunOptions::default()),
        }
    }

    /// `−Q_A / W_AB` for `swap_cooling`, using the energy basis for both views.
    pub fn efficiency(&self) -> lembas::Result<Option<f64>> {
        let Scenario::Swap(cfg, _) = self.scenario else {
            return Ok(None);
        };
        let grid = self.grid()?;
        let w_ab = scenarios::run_swap(&cfg, SwapView::Ab, &grid, None, RunOptions::default())?.work_total();
        let q_a = scenarios::restoring_heat(&scenarios::run_swap(&cfg, SwapView::A, &grid, None, RunOptions::default())?);
        Ok((w_ab != 0.0).then(|| -q_a / w_ab))
    }
}
