//! JSON run configuration. Every field has a default mirroring the
//! reference experiment, so an empty object reproduces the published
//! parameter set; unknown keys are rejected.

use crate::correlations::OptimizerConfig;
use crate::dynamics::{EnsembleModel, PhysicsParams, PrepParams};
use serde::{Deserialize, Serialize};
use std::path::Path;

use super::CliError;

/// Evolution model selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Model {
    /// Closed-form Gaussian coefficient flow.
    Analytic,
    /// Gauss–Hermite detuning ensemble.
    Ensemble,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PrepSection {
    /// Electron flip angle in units of π.
    pub theta1_pi: f64,
    /// Compensation angle in units of π.
    pub theta2_pi: f64,
    /// Coherence damping during the RF π/2 pulse; defaults to cos θ₂.
    pub f: Option<f64>,
    pub tau1_ns: f64,
    pub tau2_ns: f64,
    pub rf_pi2_ns: f64,
}

impl Default for PrepSection {
    fn default() -> Self {
        Self {
            theta1_pi: 0.70,
            theta2_pi: 0.28,
            f: None,
            tau1_ns: 1_000.0,
            tau2_ns: 200_000.0,
            rf_pi2_ns: 5_000.0,
        }
    }
}

impl PrepSection {
    pub fn to_params(&self) -> PrepParams {
        PrepParams {
            theta1: self.theta1_pi * std::f64::consts::PI,
            theta2: self.theta2_pi * std::f64::consts::PI,
            f: self.f,
            tau1_ns: self.tau1_ns,
            tau2_ns: self.tau2_ns,
            rf_pi2_ns: self.rf_pi2_ns,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnsembleSection {
    pub quadrature_order: usize,
    pub electron_grid: bool,
    pub nuclear_grid: bool,
}

impl Default for EnsembleSection {
    fn default() -> Self {
        let m = EnsembleModel::default();
        Self {
            quadrature_order: m.quadrature_order,
            electron_grid: m.electron_grid,
            nuclear_grid: m.nuclear_grid,
        }
    }
}

impl EnsembleSection {
    pub fn to_model(&self) -> EnsembleModel {
        EnsembleModel {
            quadrature_order: self.quadrature_order,
            electron_grid: self.electron_grid,
            nuclear_grid: self.nuclear_grid,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentSection {
    /// Free-decay window (ns).
    pub t_max_ns: f64,
    /// Samples per sweep (free decay and the decoupling τ sweep).
    pub points: usize,
    /// Largest τ of the decoupling sweep (ns).
    pub tau_ns: f64,
    /// Block quarter-period of the revival sequence (ns).
    pub tau4_ns: f64,
    pub n_blocks: usize,
    pub samples_per_block: usize,
    pub seed: u64,
    /// Sample count for perturbation error bars.
    pub error_samples: usize,
    /// Uniform per-element half-width (in ε units) assumed for the
    /// prepared state when error bars are requested by `state-prep`.
    pub element_error: Option<f64>,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        Self {
            t_max_ns: 500.0,
            points: 200,
            tau_ns: 7_000.0,
            tau4_ns: 1_000.0,
            n_blocks: 3,
            samples_per_block: 8,
            seed: 0,
            error_samples: 1_000,
            element_error: None,
        }
    }
}

/// Complete run configuration; mirrors the JSON config file.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub physics: PhysicsParams,
    pub prep: PrepSection,
    pub optimizer: OptimizerConfig,
    pub ensemble: EnsembleSection,
    pub experiment: ExperimentSection,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.physics
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        self.prep
            .to_params()
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        self.optimizer
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        self.ensemble
            .to_model()
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        let e = &self.experiment;
        if e.points == 0 || e.n_blocks == 0 || e.samples_per_block == 0 {
            return Err(CliError::Config("counts must be at least 1".into()));
        }
        for (name, v) in [
            ("t_max_ns", e.t_max_ns),
            ("tau_ns", e.tau_ns),
            ("tau4_ns", e.tau4_ns),
        ] {
            if !(v > 0.0) {
                return Err(CliError::Config(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if let Some(w) = e.element_error {
            if !(w >= 0.0) {
                return Err(CliError::Config(format!(
                    "element_error must be non-negative, got {w}"
                )));
            }
        }
        Ok(())
    }
}

/// A density matrix on disk: either absolute entries or a deviation from
/// 𝟙/4 in units of ε, with optional per-element error half-widths on the
/// same scale.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityMatrixFile {
    pub re: [[f64; 4]; 4],
    pub im: [[f64; 4]; 4],
    pub scale: MatrixScale,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub errors: Option<[[f64; 4]; 4]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixScale {
    #[serde(rename = "absolute")]
    Absolute,
    #[serde(rename = "deviation_epsilon")]
    DeviationEpsilon,
}
