//! Run configurations: JSON files plus `--set key=value` overrides.
//!
//! Units: frequencies are given relative to `ω_c = 2πc/L0`, times in units
//! of `1/ω_c`, lengths in units of `L0`, velocities in units of `c`.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::CliError;

/// Mirror matter and reference separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Cavity {
    pub omega_p_ratio: f64,
    pub omega_res_ratio: f64,
    pub length: f64,
}

impl Default for Cavity {
    fn default() -> Self {
        Self::metal(10.0)
    }
}

impl Cavity {
    pub fn metal(omega_p_ratio: f64) -> Self {
        Self {
            omega_p_ratio,
            omega_res_ratio: 0.0,
            length: 1.0,
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        positive("cavity.omega_p_ratio", self.omega_p_ratio)?;
        positive("cavity.length", self.length)?;
        non_negative("cavity.omega_res_ratio", self.omega_res_ratio)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModesConfig {
    pub cavity: Cavity,
    /// Largest node count to report.
    pub max_node: usize,
    /// Scattering states to tabulate, as `k/k_c` with `k_c = ω_c/c`.
    pub continuum_k: Vec<f64>,
}

impl Default for ModesConfig {
    fn default() -> Self {
        Self {
            cavity: Cavity::metal(1.0),
            max_node: 63,
            continuum_k: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub points: usize,
    pub omega_res_ratio: f64,
    pub length: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            ratio_min: 0.3,
            ratio_max: 100.0,
            points: 40,
            omega_res_ratio: 0.0,
            length: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelChoice {
    Polariton,
    Photon,
}

impl From<ModelChoice> for dce_core::Model {
    fn from(m: ModelChoice) -> Self {
        match m {
            ModelChoice::Polariton => Self::Polariton,
            ModelChoice::Photon => Self::Photon,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Trajectory {
    Static,
    /// sin²-smoothed constant-velocity move.
    Ramp {
        velocity: f64,
        duration: f64,
        #[serde(default)]
        rise_time: f64,
    },
    /// `L0 + amplitude·sin ω_M t`; without `omega_m_over_omega_c` the drive
    /// is tuned to the sum of the two lowest frequencies of the chosen model.
    Sinusoidal {
        amplitude: f64,
        #[serde(default)]
        omega_m_over_omega_c: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolveConfig {
    pub cavity: Cavity,
    pub model: ModelChoice,
    pub modes: usize,
    pub t_final: f64,
    pub samples: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub trajectory: Trajectory,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        Self {
            cavity: Cavity::metal(10.0),
            model: ModelChoice::Polariton,
            modes: 4,
            t_final: 100.0,
            samples: 101,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            trajectory: Trajectory::Sinusoidal {
                amplitude: 1e-3,
                omega_m_over_omega_c: None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecayConfig {
    pub cavity: Cavity,
    /// Mirror oscillation amplitude `ℓ/L0`.
    pub amplitude: f64,
    /// Node counts of the decaying modes.
    pub nodes: Vec<usize>,
    pub omega_m_min: f64,
    pub omega_m_max: f64,
    /// Logarithmic grid size over `[omega_m_min, omega_m_max]` (in `ω_c`).
    pub points: usize,
}

impl Default for DecayConfig {
    fn default() -> Self {
        Self {
            cavity: Cavity::metal(30.0),
            amplitude: 1e-3,
            nodes: vec![0, 1],
            omega_m_min: 900.0,
            omega_m_max: 9000.0,
            points: 11,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompareConfig {
    pub cavity: Cavity,
    pub modes: usize,
}

impl Default for CompareConfig {
    fn default() -> Self {
        Self {
            cavity: Cavity::metal(10.0),
            modes: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CheckConfig {
    pub omega_p_ratios: Vec<f64>,
    pub orthonormality_tol: f64,
    pub continuum_tol: f64,
    pub coefficient_tol: f64,
    pub decay_tol: f64,
    pub symplectic_tol: f64,
    /// Duration of the symplectic run, in `1/ω_c`.
    pub symplectic_t_final: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            omega_p_ratios: vec![1.0, 10.0],
            orthonormality_tol: 1e-8,
            continuum_tol: 1e-6,
            coefficient_tol: 1e-6,
            decay_tol: 1e-4,
            symplectic_tol: 1e-8,
            symplectic_t_final: 100.0,
        }
    }
}

pub trait Validate {
    fn validate(&self) -> Result<(), CliError>;
}

fn invalid(key: &str, reason: &str) -> CliError {
    CliError::Config(format!("{key}: {reason}"))
}

fn positive(key: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(key, "must be positive and finite"))
    }
}

fn non_negative(key: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(invalid(key, "must be non-negative and finite"))
    }
}

/// Tolerances are accepted in `(0, 1e-2]`.
fn tolerance(key: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v <= 1e-2 {
        Ok(())
    } else {
        Err(invalid(key, "tolerance must lie in (0, 1e-2]"))
    }
}

fn at_least(key: &str, v: usize, min: usize) -> Result<(), CliError> {
    if v >= min {
        Ok(())
    } else {
        Err(invalid(key, &format!("must be at least {min}")))
    }
}

impl Validate for ModesConfig {
    fn validate(&self) -> Result<(), CliError> {
        self.cavity.validate()?;
        self.continuum_k.iter().try_for_each(|&k| positive("continuum_k", k))
    }
}

impl Validate for SweepConfig {
    fn validate(&self) -> Result<(), CliError> {
        positive("ratio_min", self.ratio_min)?;
        positive("ratio_max", self.ratio_max)?;
        positive("length", self.length)?;
        non_negative("omega_res_ratio", self.omega_res_ratio)?;
        if self.ratio_max < self.ratio_min {
            return Err(invalid("ratio_max", "must not be below ratio_min"));
        }
        at_least("points", self.points, 1)
    }
}

impl Validate for EvolveConfig {
    fn validate(&self) -> Result<(), CliError> {
        self.cavity.validate()?;
        at_least("modes", self.modes, 1)?;
        at_least("samples", self.samples, 2)?;
        positive("t_final", self.t_final)?;
        tolerance("rel_tol", self.rel_tol)?;
        tolerance("abs_tol", self.abs_tol)?;
        match self.trajectory {
            Trajectory::Static => Ok(()),
            Trajectory::Ramp {
                velocity,
                duration,
                rise_time,
            } => {
                if !velocity.is_finite() || velocity.abs() >= 1.0 {
                    return Err(invalid("trajectory.velocity", "must be finite and below c"));
                }
                positive("trajectory.duration", duration)?;
                non_negative("trajectory.rise_time", rise_time)
            }
            Trajectory::Sinusoidal {
                amplitude,
                omega_m_over_omega_c,
            } => {
                non_negative("trajectory.amplitude", amplitude)?;
                if amplitude >= self.cavity.length {
                    return Err(invalid("trajectory.amplitude", "must be below the separation"));
                }
                omega_m_over_omega_c.map_or(Ok(()), |w| positive("trajectory.omega_m_over_omega_c", w))
            }
        }
    }
}

impl Validate for DecayConfig {
    fn validate(&self) -> Result<(), CliError> {
        self.cavity.validate()?;
        non_negative("amplitude", self.amplitude)?;
        positive("omega_m_min", self.omega_m_min)?;
        positive("omega_m_max", self.omega_m_max)?;
        if self.omega_m_max < self.omega_m_min {
            return Err(invalid("omega_m_max", "must not be below omega_m_min"));
        }
        at_least("points", self.points, 1)?;
        at_least("nodes", self.nodes.len(), 1)
    }
}

impl Validate for CompareConfig {
    fn validate(&self) -> Result<(), CliError> {
        self.cavity.validate()?;
        at_least("modes", self.modes, 1)
    }
}

impl Validate for CheckConfig {
    fn validate(&self) -> Result<(), CliError> {
        at_least("omega_p_ratios", self.omega_p_ratios.len(), 1)?;
        self.omega_p_ratios
            .iter()
            .try_for_each(|&r| positive("omega_p_ratios", r))?;
        tolerance("orthonormality_tol", self.orthonormality_tol)?;
        tolerance("continuum_tol", self.continuum_tol)?;
        tolerance("coefficient_tol", self.coefficient_tol)?;
        tolerance("decay_tol", self.decay_tol)?;
        tolerance("symplectic_tol", self.symplectic_tol)?;
        positive("symplectic_t_final", self.symplectic_t_final)
    }
}

/// Reads `path` (or starts from an empty object), applies the overrides in
/// order and deserializes; keys absent from both take their defaults.
pub fn load<C: DeserializeOwned + Validate>(path: Option<&Path>, sets: &[String]) -> Result<C, CliError> {
    let mut value = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
        }
        None => Value::Object(Map::new()),
    };
    for set in sets {
        apply_override(&mut value, set)?;
    }
    let config: C = serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

/// `a.b.c=value`; the value is parsed as JSON and otherwise taken as a string.
fn apply_override(root: &mut Value, set: &str) -> Result<(), CliError> {
    let (key, raw) = set
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override `{set}` is not key=value")))?;
    let parsed = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(CliError::Config(format!("override key `{key}` has an empty segment")));
        }
        let object = match node {
            Value::Object(map) => map,
            _ => {
                return Err(CliError::Config(format!(
                    "override key `{key}` descends into a non-object"
                )))
            }
        };
        if i + 1 == parts.len() {
            object.insert(part.to_string(), parsed);
            return Ok(());
        }
        node = object
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Map::new()));
    }
    Ok(())
}
