//! Executes a [`RunConfig`] and renders the result.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use susy_calogero::specfun::{bessel_j, hankel};
use susy_calogero::verify::functions::DEFAULT_TERMS;
use susy_calogero::verify::sampling::function_rng;
use susy_calogero::verify::{apply_hamiltonian, rel_residual, run_check, CheckSpec, Polynomial, ResidualReport, Sampler};
use susy_calogero::wavefunctions::{Psi11Field, Psi11Params};
use susy_calogero::{Configuration, HankelKind, ModelParams, ScalarField};

use crate::complex::{format_complex, format_real};
use crate::config::{Command, EvalFunction, EvalRequest, Format, RunConfig, SpecfunRequest, SpecialFunction};
use crate::error::CliError;

/// Degree of the `eval` test polynomial.
const EVAL_DEGREE: u32 = 4;

/// Rendered output and whether every check in it passed.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

/// A report, or the error that prevented one.
#[derive(Serialize)]
#[serde(untagged)]
enum Entry {
    Report(Box<ResidualReport>),
    Failed { check: String, seed: u64, params: ModelParams<f64>, error: String },
}

impl Entry {
    fn of(spec: &CheckSpec) -> Self {
        match run_check(spec) {
            Ok(r) => Self::Report(Box::new(r)),
            Err(e) => Self::Failed {
                check: spec.check.name().into(),
                seed: spec.seed,
                params: spec.params,
                error: e.to_string(),
            },
        }
    }

    fn passed(&self) -> bool {
        matches!(self, Self::Report(r) if r.passed)
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("outputs serialize");
    s.push('\n');
    s
}

fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = ::csv::Writer::from_writer(Vec::new());
    let io = |e: ::csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn opt_real(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_default()
}

fn verify(config: &RunConfig) -> Result<Outcome, CliError> {
    let entries: Vec<Entry> = config.check_list.iter().map(Entry::of).collect();
    let passed = entries.iter().all(Entry::passed);
    let text = match config.format {
        Format::Json => json(&entries),
        Format::Csv => {
            let header = [
                "check", "family", "n", "k1", "k2", "beta1", "beta2", "c", "seed", "samples", "tolerance", "guard",
                "max_rel_residual", "mean_rel_residual", "passed", "measured_constant", "error",
            ];
            let rows = entries.iter().zip(&config.check_list).map(|(e, spec)| {
                let p = &spec.params;
                let mut row = vec![
                    spec.check.name().to_string(),
                    p.family.name().into(),
                    p.n.to_string(),
                    p.k1.to_string(),
                    p.k2.to_string(),
                    format_real(p.beta1),
                    format_real(p.beta2),
                    format_complex(p.c.value()),
                    spec.seed.to_string(),
                    spec.samples.to_string(),
                    format_real(spec.tolerance),
                    format_real(spec.guard),
                ];
                match e {
                    Entry::Report(r) => row.extend([
                        format_real(r.max_rel_residual),
                        format_real(r.mean_rel_residual),
                        r.passed.to_string(),
                        opt_real(r.measured_constant),
                        String::new(),
                    ]),
                    Entry::Failed { error, .. } => {
                        row.extend([String::new(), String::new(), "false".into(), String::new(), error.clone()])
                    }
                }
                row
            });
            csv(&header, rows)?
        }
    };
    Ok(Outcome { text, passed })
}

fn sweep(config: &RunConfig) -> Result<Outcome, CliError> {
    let spec = &config.check_list[0];
    let entries: Vec<Entry> = config
        .sweep_grid
        .par_iter()
        .map(|&(beta1, beta2)| {
            Entry::of(&CheckSpec {
                params: ModelParams { beta1, beta2, ..spec.params },
                ..spec.clone()
            })
        })
        .collect();
    let passed = entries.iter().all(Entry::passed);
    let text = match config.format {
        Format::Json => json(&entries),
        Format::Csv => {
            let rows = entries.iter().zip(&config.sweep_grid).map(|(e, &(b1, b2))| {
                let (max, ok) = match e {
                    Entry::Report(r) => (format_real(r.max_rel_residual), r.passed),
                    Entry::Failed { .. } => (format_real(f64::NAN), false),
                };
                vec![format_real(b1), format_real(b2), spec.check.name().into(), max, ok.to_string()]
            });
            csv(&["beta1", "beta2", "check", "max_rel_residual", "passed"], rows)?
        }
    };
    Ok(Outcome { text, passed })
}

#[derive(Serialize)]
struct EvalRow {
    s1: Vec<f64>,
    s2: Vec<f64>,
    #[serde(with = "crate::complex::serde_str")]
    f: Complex64,
    #[serde(with = "crate::complex::serde_str")]
    h: Complex64,
    #[serde(with = "crate::complex::serde_str")]
    kinetic: Complex64,
    #[serde(with = "crate::complex::serde_str")]
    potential: Complex64,
    #[serde(with = "crate::complex::serde_str")]
    cross: Complex64,
    #[serde(skip_serializing_if = "Option::is_none")]
    eigen_residual: Option<f64>,
}

#[derive(Serialize)]
struct EvalOutput<'a> {
    function: EvalFunction,
    seed: u64,
    model: ModelParams<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    energy: Option<f64>,
    points: &'a [EvalRow],
}

fn eval_rows<F: ScalarField<f64>>(
    model: &ModelParams<f64>,
    f: &F,
    points: &[Configuration<f64>],
    energy: Option<f64>,
) -> Result<Vec<EvalRow>, CliError> {
    points
        .iter()
        .map(|s| {
            let out = apply_hamiltonian(model, f, s).map_err(|e| CliError::CheckFailed(e.to_string()))?;
            let v = f.value_at(&s.complex_coords());
            Ok(EvalRow {
                s1: s.s1.clone(),
                s2: s.s2.clone(),
                f: v,
                h: out.value,
                kinetic: out.kinetic_part,
                potential: out.potential_part,
                cross: out.cross_part,
                eigen_residual: energy.map(|e| rel_residual(out.value, v * e)),
            })
        })
        .collect()
}

fn eval(config: &RunConfig, req: &EvalRequest) -> Result<Outcome, CliError> {
    let m = &config.model;
    let mut sampler = Sampler::new(req.seed, req.guard);
    let (rows, energy) = match req.function {
        EvalFunction::Polynomial => {
            let points = if req.points.is_empty() {
                sampler.configurations(m, req.samples).map_err(|e| CliError::CheckFailed(e.to_string()))?
            } else {
                req.points.clone()
            };
            let poly = Polynomial::random(&mut function_rng(req.seed), m.coordinate_count(), EVAL_DEGREE, DEFAULT_TERMS);
            (eval_rows(m, &poly, &points, None)?, None)
        }
        EvalFunction::Psi11 => {
            let points = if req.points.is_empty() {
                (0..req.samples)
                    .map(|_| {
                        let (a, b) = sampler.psi_point();
                        Configuration::new(vec![a], vec![b])
                    })
                    .collect()
            } else {
                req.points.clone()
            };
            let psi = Psi11Params::paired(m.beta1, m.beta2, req.r11, req.r12, req.sign)?;
            let field = Psi11Field::new(psi)?;
            let e = psi.energy();
            (eval_rows(m, &field, &points, Some(e))?, Some(e))
        }
    };
    let text = match config.format {
        Format::Json => json(&EvalOutput { function: req.function, seed: req.seed, model: *m, energy, points: &rows }),
        Format::Csv => {
            let join = |xs: &[f64]| xs.iter().map(|x| format_real(*x)).collect::<Vec<_>>().join(" ");
            let body = rows.iter().map(|r| {
                vec![
                    req.seed.to_string(),
                    join(&r.s1),
                    join(&r.s2),
                    format_complex(r.f),
                    format_complex(r.h),
                    format_complex(r.kinetic),
                    format_complex(r.potential),
                    format_complex(r.cross),
                    opt_real(energy),
                    opt_real(r.eigen_residual),
                ]
            });
            csv(&["seed", "s1", "s2", "f", "h", "kinetic", "potential", "cross", "energy", "eigen_residual"], body)?
        }
    };
    Ok(Outcome { text, passed: true })
}

#[derive(Serialize)]
struct SpecfunRow {
    function: &'static str,
    nu: f64,
    #[serde(with = "crate::complex::serde_str")]
    z: Complex64,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn specfun(config: &RunConfig, req: &SpecfunRequest) -> Result<Outcome, CliError> {
    let rows: Vec<SpecfunRow> = req
        .nu
        .iter()
        .flat_map(|&nu| req.z.iter().map(move |&z| (nu, z)))
        .map(|(nu, z)| {
            let value = match req.function {
                SpecialFunction::Hankel1 => hankel(HankelKind::First, nu, z),
                SpecialFunction::Hankel2 => hankel(HankelKind::Second, nu, z),
                SpecialFunction::BesselJ => bessel_j(nu, z),
            };
            let (value, error) = match value {
                Ok(v) => (Some(format_complex(v)), None),
                Err(e) => (None, Some(e.to_string())),
            };
            SpecfunRow { function: req.function.name(), nu, z, value, error }
        })
        .collect();
    let passed = rows.iter().all(|r| r.error.is_none());
    let text = match config.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let body = rows.iter().map(|r| {
                vec![
                    r.function.into(),
                    format_real(r.nu),
                    format_complex(r.z),
                    r.value.clone().unwrap_or_default(),
                    r.error.clone().unwrap_or_default(),
                ]
            });
            csv(&["function", "nu", "z", "value", "error"], body)?
        }
    };
    Ok(Outcome { text, passed })
}

/// Computes the output of a validated config without writing it.
pub fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    match config.command {
        Command::Verify => verify(config),
        Command::Sweep => sweep(config),
        Command::Eval => eval(config, config.eval.as_ref().expect("validated")),
        Command::Specfun => specfun(config, config.specfun.as_ref().expect("validated")),
    }
}

/// Executes `config`, writes the output and maps the result to an exit
/// code: 0 when every check passed, 1 otherwise.
pub fn run(config: &RunConfig) -> Result<u8, CliError> {
    let outcome = execute(config)?;
    match &config.output_path {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{}", outcome.text),
    }
    Ok(if outcome.passed { 0 } else { 1 })
}
