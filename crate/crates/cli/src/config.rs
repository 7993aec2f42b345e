//! Experiment config files: TOML, one file per experiment, schema-checked
//! on load (unknown keys rejected, physical parameters validated).

use std::path::Path;

use serde::{Deserialize, Serialize};

use kmiter::{ExperimentConfig, GroundTruth, IterationKind};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema_version: u32,
    pub seed: u64,
    #[serde(default)]
    pub noise_level: f64,
    pub checkpoints: Vec<u64>,
    #[serde(default)]
    pub cross_validate: bool,
    pub domain: DomainSection,
    pub method: MethodSection,
    pub truth: TruthSpec,
    #[serde(default)]
    pub truth_derivative: Option<TruthSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub lx: f64,
    pub ly: f64,
    pub nx: usize,
    pub ny: usize,
    pub kmax: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSection {
    pub kind: MethodKindSpec,
    pub t_end: f64,
    pub a2: f64,
    /// Required for the parabolic method, rejected otherwise.
    #[serde(default)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodKindSpec {
    Elliptic,
    Hyperbolic,
    Parabolic,
}

impl From<MethodKindSpec> for IterationKind {
    fn from(kind: MethodKindSpec) -> Self {
        match kind {
            MethodKindSpec::Elliptic => IterationKind::Elliptic,
            MethodKindSpec::Hyperbolic => IterationKind::Hyperbolic,
            MethodKindSpec::Parabolic => IterationKind::Parabolic,
        }
    }
}

/// Ground-truth profile, externally tagged:
/// `truth = "zero"`, `[truth.single_mode]`, `[truth.bump]`,
/// `[truth.box]`, or `modes = [[k, m, amplitude], ...]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TruthSpec {
    Zero,
    SingleMode {
        k: usize,
        m: usize,
        amplitude: f64,
    },
    Modes(Vec<(usize, usize, f64)>),
    Bump {
        center_x: f64,
        center_y: f64,
        width: f64,
        amplitude: f64,
    },
    #[serde(rename = "box")]
    BoxProfile {
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
        amplitude: f64,
    },
}

impl From<TruthSpec> for GroundTruth {
    fn from(spec: TruthSpec) -> Self {
        match spec {
            TruthSpec::Zero => GroundTruth::Zero,
            TruthSpec::SingleMode { k, m, amplitude } => {
                GroundTruth::SingleMode { k, m, amplitude }
            }
            TruthSpec::Modes(entries) => GroundTruth::Modes(entries),
            TruthSpec::Bump {
                center_x,
                center_y,
                width,
                amplitude,
            } => GroundTruth::Bump {
                center_x,
                center_y,
                width,
                amplitude,
            },
            TruthSpec::BoxProfile { x0, x1, y0, y1, amplitude } => {
                GroundTruth::BoxProfile { x0, x1, y0, y1, amplitude }
            }
        }
    }
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        let config: ConfigFile = toml::from_str(&text)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        config.check()?;
        Ok(config)
    }

    fn check(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        match self.method.kind {
            MethodKindSpec::Parabolic => {
                if self.method.gamma.is_none() {
                    return Err(CliError::config(
                        "the parabolic method requires method.gamma",
                    ));
                }
            }
            _ => {
                if self.method.gamma.is_some() {
                    return Err(CliError::config(
                        "method.gamma only applies to the parabolic method",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Lower to the library's experiment description and validate the
    /// physical parameters (domain, basis, times, checkpoints).
    pub fn to_experiment(&self) -> Result<ExperimentConfig, CliError> {
        let config = ExperimentConfig {
            lx: self.domain.lx,
            ly: self.domain.ly,
            nx: self.domain.nx,
            ny: self.domain.ny,
            kmax: self.domain.kmax,
            method: self.method.kind.into(),
            t_end: self.method.t_end,
            a2: self.method.a2,
            gamma: self.method.gamma.unwrap_or(0.0),
            ground_truth: self.truth.clone().into(),
            ground_truth_derivative: self.truth_derivative.clone().map(Into::into),
            noise_level: self.noise_level,
            checkpoints: self.checkpoints.clone(),
            seed: self.seed,
            cross_validate: self.cross_validate,
        };
        config.validate()?;
        config.build_basis()?; // surfaces kmax/domain errors at load time
        Ok(config)
    }
}
