//! JSON run configuration shared by the CLI, the examples and the tests.
//!
//! A configuration names exactly one model, one initial state, the time
//! grid, the observable family, the checks to run and the engine, Monte-
//! Carlo and output knobs. All randomness is seeded here; no output path
//! depends on wall clock or OS entropy.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constants::GridOptions;
use crate::error::{Error, Result};
use crate::exact::Observable;
use crate::model::{validate_model, ModelSpec, NeuronModel, State};
use crate::space::{build_rate_matrix, RateMatrix, StateSpace};

pub const SCHEMA_VERSION: u32 = 1;

/// A fully built system: validated model, initial state, enumerated space
/// and the generator matrix.
pub struct System {
    pub model: NeuronModel,
    pub x0: State,
    pub space: StateSpace,
    pub q: RateMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub schema: u32,
    pub model: ModelSpec,
    pub initial_state: Vec<f64>,
    #[serde(default = "TimesSpec::default")]
    pub times: TimesSpec,
    #[serde(default)]
    pub observables: Vec<ObservableSpec>,
    #[serde(default = "default_checks")]
    pub checks: Vec<CheckKind>,
    #[serde(default)]
    pub engine: EngineConfig,
    #[serde(default)]
    pub mc: McConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Either an explicit list of horizons or a log-spaced grid description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TimesSpec {
    List(Vec<f64>),
    LogGrid {
        start: f64,
        stop: f64,
        per_decade: usize,
    },
}

impl Default for TimesSpec {
    fn default() -> Self {
        TimesSpec::List(vec![0.25, 0.5, 1.0, 2.0, 4.0])
    }
}

impl TimesSpec {
    pub fn resolve(&self) -> Result<Vec<f64>> {
        let times = match self {
            TimesSpec::List(ts) => ts.clone(),
            TimesSpec::LogGrid {
                start,
                stop,
                per_decade,
            } => {
                if !(*start > 0.0 && stop > start && *per_decade >= 1) {
                    return Err(Error::Config {
                        field: "times".into(),
                        message: "log grid needs 0 < start < stop and per_decade >= 1".into(),
                    });
                }
                crate::numerics::log_grid(*start, *stop, *per_decade)
            }
        };
        if times.is_empty() {
            return Err(Error::Config {
                field: "times".into(),
                message: "at least one time is required".into(),
            });
        }
        for &t in &times {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::Config {
                    field: "times".into(),
                    message: format!("times must be positive and finite, got {t}"),
                });
            }
        }
        Ok(times)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ObservableSpec {
    /// `count` iid standard-normal observables drawn from `seed`.
    Random { count: usize, seed: u64 },
    /// Projection onto one neuron's potential.
    Coordinate { index: usize },
    /// Indicator of a single state (exact potentials) or of the recurrent
    /// domain.
    Indicator {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        state: Option<Vec<f64>>,
        #[serde(default)]
        recurrent: bool,
    },
    /// Values read from a JSON array file, one entry per state index.
    File { path: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    TheoremGeneral,
    TheoremRecurrent,
    Corollaries,
    Invariant,
    Identities,
    MontecarloCrosscheck,
}

fn default_checks() -> Vec<CheckKind> {
    vec![
        CheckKind::TheoremGeneral,
        CheckKind::TheoremRecurrent,
        CheckKind::Corollaries,
        CheckKind::Invariant,
        CheckKind::Identities,
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EngineConfig {
    /// Tail tolerance for matrix-exponential evaluations.
    pub exp_tol: f64,
    /// Cap on the enumerated state count.
    pub state_cap: usize,
    /// Log-grid density for the constant scans.
    pub grid_per_decade: usize,
    /// Linear-grid size for the theta certification.
    pub theta_points: usize,
    /// Relative pass tolerance of the inequality reports.
    pub pass_rel_tol: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            exp_tol: 1e-12,
            state_cap: crate::space::DEFAULT_STATE_CAP,
            grid_per_decade: 64,
            theta_points: 64,
            pass_rel_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McConfig {
    pub n_paths: usize,
    pub seed: u64,
    /// Horizons compared against the exact engine by `simulate`.
    pub times: Vec<f64>,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            n_paths: 100_000,
            seed: 7,
            times: vec![0.5, 2.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputConfig {
    /// Output directory; `-` streams JSON lines to stdout.
    pub dir: Option<String>,
    pub format: OutputFormat,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: None,
            format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: RunConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        let text = std::fs::read_to_string(&path)?;
        Self::from_json(&text)
    }

    fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Config {
                field: "schema".into(),
                message: format!(
                    "unsupported schema {}, expected {SCHEMA_VERSION}",
                    self.schema
                ),
            });
        }
        if self.initial_state.len() != self.model.n {
            return Err(Error::Config {
                field: "initial_state".into(),
                message: format!(
                    "expected {} potentials, found {}",
                    self.model.n,
                    self.initial_state.len()
                ),
            });
        }
        self.times.resolve()?;
        if self.mc.n_paths < 2 {
            return Err(Error::Config {
                field: "mc.n_paths".into(),
                message: "need at least two paths".into(),
            });
        }
        for (k, spec) in self.observables.iter().enumerate() {
            if let ObservableSpec::File { path } = spec {
                if !Path::new(path).exists() {
                    return Err(Error::Config {
                        field: format!("observables[{k}].path"),
                        message: format!("file not found: {path}"),
                    });
                }
            }
            if let ObservableSpec::Indicator { state, recurrent } = spec {
                if state.is_none() && !recurrent {
                    return Err(Error::Config {
                        field: format!("observables[{k}]"),
                        message: "indicator needs either a state or recurrent = true".into(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Validate the model, build the initial state and enumerate its closure.
    pub fn build_system(&self) -> Result<System> {
        let model = validate_model(&self.model)?;
        let x0 = model.state(&self.initial_state)?;
        let space = StateSpace::enumerate(&model, &x0, self.engine.state_cap)?;
        let q = build_rate_matrix(&model, &space);
        Ok(System { model, x0, space, q })
    }

    /// Grid options for the constant scans.
    pub fn grid_options(&self) -> GridOptions {
        GridOptions {
            per_decade: self.engine.grid_per_decade,
            theta_points: self.engine.theta_points,
            exp_tol: self.engine.exp_tol.min(1e-13),
        }
    }

    /// Materialize the configured observables over an enumerated space.
    pub fn build_observables(&self, system: &System) -> Result<Vec<(String, Observable)>> {
        let mut out = Vec::new();
        for (k, spec) in self.observables.iter().enumerate() {
            match spec {
                ObservableSpec::Random { count, seed } => {
                    out.extend(crate::verify::random_observables(&system.space, *count, *seed)?);
                }
                ObservableSpec::Coordinate { index } => {
                    out.push((
                        format!("coord_{index}"),
                        Observable::coordinate(&system.space, *index)?,
                    ));
                }
                ObservableSpec::Indicator { state, recurrent } => {
                    if let Some(potentials) = state {
                        let target = system.model.state(potentials)?;
                        let index = system.space.index_of(&target).ok_or_else(|| {
                            Error::ObservableUndefined(format!(
                                "indicator state {potentials:?} is not in the enumerated space"
                            ))
                        })?;
                        out.push((
                            format!("indicator_{index}"),
                            Observable::indicator(&system.space, index)?,
                        ));
                    } else if *recurrent {
                        out.push((
                            "recurrent_indicator".into(),
                            Observable::indicator_recurrent(&system.space)?,
                        ));
                    }
                }
                ObservableSpec::File { path } => {
                    let text = std::fs::read_to_string(path)?;
                    let values: Vec<f64> = serde_json::from_str(&text)?;
                    out.push((
                        format!("file_{k}"),
                        Observable::from_values(&system.space, values)?,
                    ));
                }
            }
        }
        Ok(out)
    }
}
