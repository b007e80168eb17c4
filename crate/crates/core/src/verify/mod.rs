//! Seeded residual harness. Every identity becomes a [`CheckSpec`]; running
//! it yields a [`ResidualReport`] that is a pure function of the spec.

mod checks;
pub mod functions;
pub mod sampling;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Configuration, ModelFamily, ModelParams, DEFAULT_SINGULAR_GUARD};

pub use checks::{
    apply_hamiltonian, check_cast_osp, check_eigen_psi11, check_hermiticity, check_rotation,
    check_similarity, check_structure, default_dipole_couplings, run_check, Domain,
};
pub use functions::{Bump, CosineProduct, MirrorInduced, Polynomial, Restricted};
pub use sampling::Sampler;

/// `ε` in `|L − R| / (|L| + |R| + ε)`.
pub const RESIDUAL_EPSILON: f64 = 1e-300;
pub const DEFAULT_SAMPLES: usize = 100;
/// Test polynomials per similarity cell.
pub const SIMILARITY_FUNCTIONS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    SimilarityOrdinary,
    SimilarityUnitary,
    SimilarityOsp,
    RotationEquivalence,
    CastOsp,
    EigenPsi11,
    Hermiticity,
    Decoupling,
    SignFlip,
    Reduction,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        Self::SimilarityOrdinary,
        Self::SimilarityUnitary,
        Self::SimilarityOsp,
        Self::RotationEquivalence,
        Self::CastOsp,
        Self::EigenPsi11,
        Self::Hermiticity,
        Self::Decoupling,
        Self::SignFlip,
        Self::Reduction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::SimilarityOrdinary => "similarity_ordinary",
            Self::SimilarityUnitary => "similarity_unitary",
            Self::SimilarityOsp => "similarity_osp",
            Self::RotationEquivalence => "rotation_equivalence",
            Self::CastOsp => "cast_osp",
            Self::EigenPsi11 => "eigen_psi11",
            Self::Hermiticity => "hermiticity",
            Self::Decoupling => "decoupling",
            Self::SignFlip => "sign_flip",
            Self::Reduction => "reduction",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Self::EigenPsi11 => 1e-7,
            Self::Decoupling | Self::SignFlip | Self::Reduction => 1e-12,
            _ => 1e-8,
        }
    }

    /// Family used when a caller gives only the check and the counts.
    pub fn default_family(self) -> ModelFamily {
        match self {
            Self::SimilarityOrdinary => ModelFamily::OrdinaryCs,
            Self::SimilarityUnitary | Self::EigenPsi11 | Self::Decoupling | Self::Reduction => {
                ModelFamily::SusyUnitary
            }
            Self::RotationEquivalence | Self::Hermiticity => ModelFamily::TwoBand,
            Self::SimilarityOsp | Self::CastOsp | Self::SignFlip => ModelFamily::SusyOsp,
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown check '{s}'")))
    }
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

fn default_guard() -> f64 {
    DEFAULT_SINGULAR_GUARD
}

/// What to check, on which model, how often and how strictly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub check: CheckKind,
    pub params: ModelParams<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    pub tolerance: f64,
    #[serde(default = "default_guard")]
    pub guard: f64,
}

impl CheckSpec {
    pub fn new(check: CheckKind, params: ModelParams<f64>) -> Self {
        Self {
            check,
            params,
            samples: DEFAULT_SAMPLES,
            seed: 0,
            tolerance: check.default_tolerance(),
            guard: DEFAULT_SINGULAR_GUARD,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_guard(mut self, guard: f64) -> Self {
        self.guard = guard;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidParams("samples must be >= 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParams(format!("tolerance {} must be > 0", self.tolerance)));
        }
        if !(self.guard >= 0.0) {
            return Err(Error::InvalidParams(format!("guard {} must be >= 0", self.guard)));
        }
        self.params.validate()
    }
}

/// Aggregate residuals of one check. Serializes flat, with the spec fields
/// alongside the results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub check: CheckKind,
    pub seed: u64,
    pub samples: usize,
    pub max_rel_residual: f64,
    pub mean_rel_residual: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured_constant: Option<f64>,
    pub params: ModelParams<f64>,
    pub tolerance: f64,
    pub guard: f64,
    pub worst_point: Configuration<f64>,
}

impl ResidualReport {
    /// Reduces per-point residuals; ties keep the first maximum.
    pub fn from_residuals(spec: &CheckSpec, residuals: Vec<(f64, Configuration<f64>)>) -> Result<Self> {
        if residuals.is_empty() {
            return Err(Error::InvalidParams("no residuals to report".into()));
        }
        if residuals.iter().any(|(r, _)| !r.is_finite()) {
            return Err(Error::SingularConfiguration);
        }
        let mean = residuals.iter().map(|(r, _)| r).sum::<f64>() / residuals.len() as f64;
        let mut worst = 0;
        for (i, (r, _)) in residuals.iter().enumerate() {
            if *r > residuals[worst].0 {
                worst = i;
            }
        }
        let (max, point) = residuals.into_iter().nth(worst).expect("non-empty");
        Ok(Self {
            check: spec.check,
            seed: spec.seed,
            samples: spec.samples,
            max_rel_residual: max,
            mean_rel_residual: mean,
            passed: max <= spec.tolerance,
            measured_constant: None,
            params: spec.params,
            tolerance: spec.tolerance,
            guard: spec.guard,
            worst_point: point,
        })
    }

    /// Combines reports of the same spec over several test functions:
    /// max of maxima, mean of means.
    pub fn merge(reports: Vec<ResidualReport>) -> Result<Self> {
        let mut it = reports.into_iter();
        let mut acc = it.next().ok_or_else(|| Error::InvalidParams("nothing to merge".into()))?;
        let mut count = 1.0;
        for r in it {
            acc.mean_rel_residual += r.mean_rel_residual;
            count += 1.0;
            if r.max_rel_residual > acc.max_rel_residual {
                acc.max_rel_residual = r.max_rel_residual;
                acc.worst_point = r.worst_point;
            }
        }
        acc.mean_rel_residual /= count;
        acc.passed = acc.max_rel_residual <= acc.tolerance;
        Ok(acc)
    }

    pub fn spec(&self) -> CheckSpec {
        CheckSpec {
            check: self.check,
            params: self.params,
            samples: self.samples,
            seed: self.seed,
            tolerance: self.tolerance,
            guard: self.guard,
        }
    }
}

/// `|l − r| / (|l| + |r| + ε)`.
pub fn rel_residual(l: num_complex::Complex<f64>, r: num_complex::Complex<f64>) -> f64 {
    (l - r).norm() / (l.norm() + r.norm() + RESIDUAL_EPSILON)
}
