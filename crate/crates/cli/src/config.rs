//! Scenario configuration: a single JSON document.
//!
//! ```json
//! {
//!   "spectrum":   {"form": "drude", "lambda": 0.1, "mu": 0, "omega_c": 1},
//!   "bath_state": {"kind": "cat", "phi": 0, "profile": {"kind": "exponential", "amplitude": 0.5, "width": 1}},
//!   "qubit":      {"epsilon": 0, "theta": 1.5707963267948966, "phi": 0},
//!   "two_qubit":  {"bell_index": 1, "p": 0.2, "epsilon_q": 0},
//!   "grid":       {"t_max": 10, "steps": 101, "spacing": "linear"},
//!   "quantities": ["A", "coherence", "purity", "negativity"],
//!   "tolerances": {"abs_tol": 1e-10, "rel_tol": 1e-9, "max_evaluations": 1000000}
//! }
//! ```

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use qubit_dephasing::bath::CouplingSpectrum;
use qubit_dephasing::dephasing::{BathState, QubitSpec};
use qubit_dephasing::entanglement::TwoQubitScenario;
use qubit_dephasing::quadrature::QuadratureTolerance;
use qubit_dephasing::qubit::BlochState;
use qubit_dephasing::registry::{
    build_spectrum, default_bath_states, default_spectral_forms, BuildContext,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    /// The document is not valid JSON, or a field has the wrong type or name.
    #[error("parse error{}: {message}", location(.line, .column, .field))]
    Parse {
        line: Option<usize>,
        column: Option<usize>,
        field: Option<String>,
        message: String,
    },

    /// The document parses but violates a model constraint.
    #[error("validation error in `{field}`: {message}")]
    Validation { field: String, message: String },
}

fn location(line: &Option<usize>, column: &Option<usize>, field: &Option<String>) -> String {
    let mut out = String::new();
    if let Some(l) = line {
        out.push_str(&format!(" at line {l}"));
        if let Some(c) = column {
            out.push_str(&format!(", column {c}"));
        }
    }
    if let Some(f) = field {
        out.push_str(&format!(" in field `{f}`"));
    }
    out
}

impl ConfigError {
    fn validation(field: &str, message: impl fmt::Display) -> Self {
        ConfigError::Validation {
            field: field.to_owned(),
            message: message.to_string(),
        }
    }

    fn from_core(field: &str, err: qubit_dephasing::Error) -> Self {
        match err {
            qubit_dephasing::Error::Field { field, message } => ConfigError::Parse {
                line: None,
                column: None,
                field: Some(field),
                message,
            },
            other => ConfigError::validation(field, other),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quantity {
    #[serde(rename = "A", alias = "a")]
    A,
    #[serde(rename = "purity")]
    Purity,
    #[serde(rename = "coherence")]
    Coherence,
    #[serde(rename = "negativity")]
    Negativity,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t_max: f64,
    pub steps: usize,
    #[serde(default)]
    pub spacing: Spacing,
    /// First point; defaults to 0 on a linear grid and is required on a log grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_min: Option<f64>,
}

impl GridConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(ConfigError::validation("grid.t_max", format!("must be > 0, got {}", self.t_max)));
        }
        if self.steps < 1 {
            return Err(ConfigError::validation("grid.steps", "must be >= 1"));
        }
        match (self.spacing, self.t_min) {
            (Spacing::Log, None) => Err(ConfigError::validation(
                "grid.t_min",
                "a log grid needs t_min > 0",
            )),
            (Spacing::Log, Some(t0)) if !(t0.is_finite() && t0 > 0.0) => Err(ConfigError::validation(
                "grid.t_min",
                format!("a log grid needs t_min > 0, got {t0}"),
            )),
            (_, Some(t0)) if !(t0.is_finite() && t0 >= 0.0 && t0 <= self.t_max) => {
                Err(ConfigError::validation(
                    "grid.t_min",
                    format!("must lie in [0, t_max], got {t0}"),
                ))
            }
            _ => Ok(()),
        }
    }

    /// The sample times in increasing order; the last point is `t_max` exactly
    /// whenever `steps > 1`.
    pub fn times(&self) -> Vec<f64> {
        let n = self.steps;
        let t0 = self.t_min.unwrap_or(0.0);
        if n == 1 {
            return vec![t0];
        }
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    return self.t_max;
                }
                let x = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => t0 + (self.t_max - t0) * x,
                    Spacing::Log => t0 * ((self.t_max / t0).ln() * x).exp(),
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitConfig {
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default = "default_theta")]
    pub theta: f64,
    #[serde(default)]
    pub phi: f64,
}

fn default_theta() -> f64 {
    FRAC_PI_2
}

impl Default for QubitConfig {
    fn default() -> Self {
        QubitConfig {
            epsilon: 0.0,
            theta: default_theta(),
            phi: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoQubitConfig {
    pub bell_index: u8,
    pub p: f64,
    #[serde(default)]
    pub epsilon_q: f64,
}

fn default_bath_state() -> Value {
    serde_json::json!({"kind": "vacuum"})
}

fn default_quantities() -> Vec<Quantity> {
    vec![Quantity::A, Quantity::Coherence]
}

/// The document as written, with defaults filled in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub spectrum: Value,
    #[serde(default = "default_bath_state")]
    pub bath_state: Value,
    #[serde(default)]
    pub qubit: QubitConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_qubit: Option<TwoQubitConfig>,
    pub grid: GridConfig,
    #[serde(default = "default_quantities")]
    pub quantities: Vec<Quantity>,
    #[serde(default)]
    pub tolerances: QuadratureTolerance,
}

#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub raw: RawConfig,
    pub spectrum: CouplingSpectrum,
    pub bath_state: Arc<dyn BathState>,
    pub qubit: QubitSpec,
    pub bloch: BlochState,
    pub two_qubit: Option<TwoQubitScenario>,
    pub grid: GridConfig,
    /// Sorted, without duplicates.
    pub quantities: Vec<Quantity>,
    pub tolerance: QuadratureTolerance,
}

impl ScenarioConfig {
    pub fn wants(&self, q: Quantity) -> bool {
        self.quantities.contains(&q)
    }
}

/// Parses and validates a config; relative table paths resolve against `base_dir`.
pub fn parse_config_in(text: &str, base_dir: &Path) -> Result<ScenarioConfig, ConfigError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        ConfigError::Parse {
            line: Some(inner.line()),
            column: Some(inner.column()),
            field: (field != ".").then_some(field),
            message: strip_position(&inner.to_string()),
        }
    })?;
    de.end().map_err(|e| ConfigError::Parse {
        line: Some(e.line()),
        column: Some(e.column()),
        field: None,
        message: strip_position(&e.to_string()),
    })?;
    validate(raw, base_dir)
}

/// Same as [`parse_config_in`] with paths relative to the working directory.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    parse_config_in(text, Path::new("."))
}

/// serde_json appends " at line L column C"; the position is reported separately.
fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_owned(),
        None => message.to_owned(),
    }
}

fn validate(raw: RawConfig, base_dir: &Path) -> Result<ScenarioConfig, ConfigError> {
    let ctx = BuildContext::new(PathBuf::from(base_dir));
    let spectrum = build_spectrum(&default_spectral_forms(), &raw.spectrum, "spectrum", &ctx)
        .map_err(|e| ConfigError::from_core("spectrum", e))?;
    let bath_state = default_bath_states()
        .build_tagged(&raw.bath_state, "kind", "bath_state", &ctx)
        .map_err(|e| ConfigError::from_core("bath_state", e))?;
    let qubit = QubitSpec::new(raw.qubit.epsilon)
        .map_err(|e| ConfigError::validation("qubit.epsilon", e))?;
    let bloch = BlochState::new(raw.qubit.theta, raw.qubit.phi)
        .map_err(|e| ConfigError::validation("qubit", e))?;
    let two_qubit = raw
        .two_qubit
        .map(|t| TwoQubitScenario::new(t.bell_index, t.p, t.epsilon_q))
        .transpose()
        .map_err(|e| ConfigError::validation("two_qubit", e))?;
    raw.grid.validate()?;
    raw.tolerances
        .validate()
        .map_err(|e| ConfigError::validation("tolerances", e))?;

    let mut quantities = raw.quantities.clone();
    quantities.sort();
    quantities.dedup();
    if quantities.contains(&Quantity::Negativity) && two_qubit.is_none() {
        return Err(ConfigError::validation(
            "quantities",
            "negativity requires a two_qubit block",
        ));
    }

    Ok(ScenarioConfig {
        spectrum,
        bath_state,
        qubit,
        bloch,
        two_qubit,
        grid: raw.grid,
        quantities,
        tolerance: raw.tolerances,
        raw,
    })
}
