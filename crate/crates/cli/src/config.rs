//! The run description every invocation is reduced to.

use std::path::PathBuf;

use clap::ValueEnum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use susy_calogero::verify::CheckSpec;
use susy_calogero::{Configuration, ModelFamily, ModelParams, Rotation, Sign, DEFAULT_SINGULAR_GUARD};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Eval,
    Verify,
    Sweep,
    Specfun,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Field the operator is applied to by `eval`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum EvalFunction {
    /// Seeded random degree-4 polynomial, as used by the checks.
    #[default]
    Polynomial,
    /// Closed-form two-particle eigenfunction.
    Psi11,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalRequest {
    #[serde(default)]
    pub function: EvalFunction,
    #[serde(default)]
    pub seed: u64,
    /// Points drawn when `points` is empty.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_guard")]
    pub guard: f64,
    #[serde(default)]
    pub points: Vec<Configuration<f64>>,
    #[serde(default = "one")]
    pub r11: f64,
    #[serde(default = "one")]
    pub r12: f64,
    #[serde(default = "plus")]
    pub sign: Sign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialFunction {
    Hankel1,
    Hankel2,
    BesselJ,
}

impl SpecialFunction {
    pub fn name(self) -> &'static str {
        match self {
            Self::Hankel1 => "hankel1",
            Self::Hankel2 => "hankel2",
            Self::BesselJ => "bessel_j",
        }
    }
}

/// Evaluate `function` on every `(ν, z)` of the cartesian product.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecfunRequest {
    pub function: SpecialFunction,
    pub nu: Vec<f64>,
    #[serde(with = "crate::complex::serde_str_vec")]
    pub z: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default = "default_model")]
    pub model: ModelParams<f64>,
    #[serde(default)]
    pub check_list: Vec<CheckSpec>,
    #[serde(default)]
    pub sweep_grid: Vec<(f64, f64)>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval: Option<EvalRequest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub specfun: Option<SpecfunRequest>,
}

fn default_samples() -> usize {
    susy_calogero::verify::DEFAULT_SAMPLES
}

fn default_guard() -> f64 {
    DEFAULT_SINGULAR_GUARD
}

fn one() -> f64 {
    1.0
}

fn plus() -> Sign {
    Sign::Plus
}

/// One particle of each kind, `β = (1, 4)`, `c = +i`; `n = 2` for the
/// ordinary families.
pub fn default_model() -> ModelParams<f64> {
    ModelParams {
        family: ModelFamily::SusyUnitary,
        n: 2,
        k1: 1,
        k2: 1,
        beta1: 1.0,
        beta2: 4.0,
        c: Rotation::PlusI,
    }
}

impl EvalRequest {
    pub fn new(function: EvalFunction) -> Self {
        Self {
            function,
            seed: 0,
            samples: default_samples(),
            guard: default_guard(),
            points: Vec::new(),
            r11: 1.0,
            r12: 1.0,
            sign: Sign::Plus,
        }
    }
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::ConfigParse(msg.into())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| bad(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("RunConfig serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        match self.command {
            Command::Verify => {
                if self.check_list.is_empty() {
                    return Err(bad("verify needs at least one check"));
                }
                for spec in &self.check_list {
                    spec.validate()?;
                }
            }
            Command::Sweep => {
                let [spec] = self.check_list.as_slice() else {
                    return Err(bad("sweep needs exactly one check"));
                };
                if self.sweep_grid.is_empty() {
                    return Err(bad("sweep grid is empty"));
                }
                for &(beta1, beta2) in &self.sweep_grid {
                    CheckSpec { params: ModelParams { beta1, beta2, ..spec.params }, ..spec.clone() }.validate()?;
                }
            }
            Command::Eval => {
                let req = self.eval.as_ref().ok_or_else(|| bad("eval section missing"))?;
                self.model.validate()?;
                if req.function == EvalFunction::Psi11 {
                    let m = &self.model;
                    if m.family != ModelFamily::SusyUnitary || m.k1 != 1 || m.k2 != 1 || m.c != Rotation::PlusI {
                        return Err(bad("psi11 needs family susy_unitary with k1 = k2 = 1 and c = +i"));
                    }
                    susy_calogero::wavefunctions::Psi11Params::paired(m.beta1, m.beta2, req.r11, req.r12, req.sign)?;
                } else if req.points.is_empty() && req.samples == 0 {
                    return Err(bad("eval needs points or samples >= 1"));
                }
                for p in &req.points {
                    if req.function == EvalFunction::Psi11 {
                        p.check_shape(&self.model)?;
                    } else {
                        p.validate(&self.model, req.guard)?;
                    }
                }
            }
            Command::Specfun => {
                let req = self.specfun.as_ref().ok_or_else(|| bad("specfun section missing"))?;
                if req.nu.is_empty() || req.z.is_empty() {
                    return Err(bad("specfun needs at least one nu and one z"));
                }
            }
        }
        Ok(())
    }
}
