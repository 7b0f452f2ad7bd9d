//! JSON configuration file.
//!
//! ```json
//! {
//!   "units": {"hbar": 1, "mass": 1},
//!   "potential": {"kind": "well", "U": 1, "q": 2},
//!   "defaults": {"epsilon": 1e-6, "tolerances": {"qshje": 1e-8}},
//!   "sweep": {"parameter": "E", "start": 0.05, "end": 0.45, "count": 11}
//! }
//! ```
//!
//! Unknown keys are rejected. Command-line flags override file values.

use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitsConfig {
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub mass: f64,
}

impl Default for UnitsConfig {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
        }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialKind {
    Step,
    Well,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    pub kind: PotentialKind,
    #[serde(rename = "U")]
    pub height: f64,
    #[serde(default)]
    pub q: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Residual bound for `qshje-check`, relative to `E`.
    #[serde(default = "default_qshje_tol")]
    pub qshje: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            qshje: default_qshje_tol(),
        }
    }
}

fn default_qshje_tol() -> f64 {
    1e-8
}

fn default_epsilon() -> f64 {
    trcov::times::DEFAULT_EPSILON
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Defaults {
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl Default for Defaults {
    fn default() -> Self {
        Self {
            epsilon: default_epsilon(),
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: String,
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub units: UnitsConfig,
    #[serde(default)]
    pub potential: Option<PotentialConfig>,
    #[serde(default)]
    pub defaults: Defaults,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: Config = serde_json::from_str(text)
            .map_err(|e| format!("config line {} column {}: {e}", e.line(), e.column()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(format!(
                    "config field {name} must be positive and finite, got {v}"
                ))
            }
        };
        positive("units.hbar", self.units.hbar)?;
        positive("units.mass", self.units.mass)?;
        if let Some(p) = &self.potential {
            positive("potential.U", p.height)?;
            match (p.kind, p.q) {
                (PotentialKind::Well, None) => {
                    return Err("config field potential.q is required for kind \"well\"".into())
                }
                (PotentialKind::Step, Some(_)) => {
                    return Err("config field potential.q is only allowed for kind \"well\"".into())
                }
                (_, Some(q)) => positive("potential.q", q)?,
                _ => {}
            }
        }
        positive("defaults.epsilon", self.defaults.epsilon)?;
        positive("defaults.tolerances.qshje", self.defaults.tolerances.qshje)?;
        if let Some(s) = &self.sweep {
            if s.count < 1 {
                return Err("config field sweep.count must be at least 1".into());
            }
        }
        Ok(())
    }
}

pub fn load_config(path: &Path) -> Result<Config, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    Config::parse(&text)
}
