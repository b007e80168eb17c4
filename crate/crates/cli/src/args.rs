//! Command-line flags and their mapping onto [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use susy_calogero::verify::{CheckKind, CheckSpec, DEFAULT_SAMPLES};
use susy_calogero::{Configuration, ModelFamily, ModelParams, Rotation, Sign, DEFAULT_SINGULAR_GUARD};

use crate::complex::{format_complex, parse_complex};
use crate::config::{
    default_model, Command, EvalFunction, EvalRequest, Format, RunConfig, SpecfunRequest, SpecialFunction,
};
use crate::error::CliError;

const FAMILIES: [ModelFamily; 7] = [
    ModelFamily::OrdinaryCs,
    ModelFamily::LbOrdinary,
    ModelFamily::LbSuper,
    ModelFamily::SusyUnitary,
    ModelFamily::TwoBand,
    ModelFamily::SusyOsp,
    ModelFamily::Dipole2d,
];

fn parse_family(s: &str) -> Result<ModelFamily, String> {
    FAMILIES
        .into_iter()
        .find(|f| f.name() == s)
        .ok_or_else(|| format!("unknown family '{s}'"))
}

fn parse_rotation(s: &str) -> Result<Rotation, String> {
    match s {
        "+i" | "i" => Ok(Rotation::PlusI),
        "-i" => Ok(Rotation::MinusI),
        _ => Err(format!("c must be +i or -i, got '{s}'")),
    }
}

fn rotation_str(c: Rotation) -> &'static str {
    match c {
        Rotation::PlusI => "+i",
        Rotation::MinusI => "-i",
    }
}

fn parse_check(s: &str) -> Result<CheckKind, String> {
    s.parse().map_err(|e: susy_calogero::Error| e.to_string())
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s {
        "plus" | "+" => Ok(Sign::Plus),
        "minus" | "-" => Ok(Sign::Minus),
        _ => Err(format!("sign must be plus or minus, got '{s}'")),
    }
}

fn sign_str(s: Sign) -> &'static str {
    match s {
        Sign::Plus => "plus",
        Sign::Minus => "minus",
    }
}

fn reals(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("'{t}' is not a number")))
        .collect()
}

/// `"x1,x2;y1"`: first set, `;`, second set.
pub fn parse_point(s: &str) -> Result<Configuration<f64>, String> {
    let (a, b) = s.split_once(';').unwrap_or((s, ""));
    Ok(Configuration::new(reals(a)?, reals(b)?))
}

fn point_str(p: &Configuration<f64>) -> String {
    let join = |xs: &[f64]| xs.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
    format!("{};{}", join(&p.s1), join(&p.s2))
}

/// `"b1,b2;b1,b2;…"`.
pub fn parse_grid(s: &str) -> Result<Vec<(f64, f64)>, String> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|pair| match reals(pair)?.as_slice() {
            &[a, b] => Ok((a, b)),
            _ => Err(format!("grid entry '{pair}' is not a beta1,beta2 pair")),
        })
        .collect()
}

fn grid_str(grid: &[(f64, f64)]) -> String {
    grid.iter().map(|(a, b)| format!("{a},{b}")).collect::<Vec<_>>().join(";")
}

#[derive(Debug, Parser)]
#[command(name = "susy-calogero", version, about = "Construct, apply and cross-check supersymmetric Calogero-Sutherland operators")]
pub struct Cli {
    /// JSON file holding a full run config or a model parameter object.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Minimum distance of sampled points to the singular set.
    #[arg(long, global = true)]
    pub guard: Option<f64>,
    #[command(subcommand)]
    pub command: Option<Sub>,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Apply the family operator to a test field at points.
    Eval(EvalArgs),
    /// Run identity checks and report residuals.
    Verify(VerifyArgs),
    /// Run one check over a (beta1, beta2) grid.
    Sweep(SweepArgs),
    /// Evaluate Hankel or Bessel functions.
    Specfun(SpecfunArgs),
}

#[derive(Debug, Default, Args)]
pub struct ModelArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Option<ModelFamily>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k1: Option<usize>,
    #[arg(long)]
    pub k2: Option<usize>,
    #[arg(long)]
    pub beta1: Option<f64>,
    #[arg(long)]
    pub beta2: Option<f64>,
    /// Rotation parameter, `+i` or `-i`.
    #[arg(long, value_parser = parse_rotation, allow_hyphen_values = true)]
    pub c: Option<Rotation>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Check names; repeat or separate with commas.
    #[arg(long, required = true, value_delimiter = ',', value_parser = parse_check)]
    pub check: Vec<CheckKind>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_parser = parse_check)]
    pub check: CheckKind,
    /// `"b1,b2;b1,b2;…"`.
    #[arg(long, required = true, value_parser = parse_grid)]
    pub grid: Vec<Vec<(f64, f64)>>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = EvalFunction::Polynomial)]
    pub function: EvalFunction,
    /// `"x1,x2;y1"`; repeatable. Without points, `--samples` points are drawn.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub point: Vec<Configuration<f64>>,
    #[arg(long, default_value_t = 1.0)]
    pub r11: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r12: f64,
    #[arg(long, value_parser = parse_sign, default_value = "plus")]
    pub sign: Sign,
}

#[derive(Debug, Args)]
pub struct SpecfunArgs {
    /// Hankel function of the first (1) or second (2) kind.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), conflicts_with = "bessel", required_unless_present = "bessel")]
    pub hankel: Option<u8>,
    /// Bessel function of the first kind.
    #[arg(long)]
    pub bessel: bool,
    #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub nu: Vec<f64>,
    /// Complex arguments such as `2+0i`; comma separated.
    #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_complex)]
    pub z: Vec<num_complex::Complex64>,
}

/// What a `--config` file supplied.
enum Base {
    None,
    Model(ModelParams<f64>),
    Run(Box<RunConfig>),
}

fn read_base(path: &Option<PathBuf>) -> Result<Base, CliError> {
    let Some(path) = path else { return Ok(Base::None) };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    match RunConfig::from_json(&text) {
        Ok(run) => Ok(Base::Run(Box::new(run))),
        Err(run_err) => match serde_json::from_str::<ModelParams<f64>>(&text) {
            Ok(model) => Ok(Base::Model(model)),
            Err(_) => Err(CliError::ConfigParse(format!("{}: {run_err}", path.display()).replace("config error: ", ""))),
        },
    }
}

impl ModelArgs {
    /// Flags over `base` over the defaults. The family falls back to
    /// `fallback` only when neither flags nor `base` name one.
    fn resolve(&self, base: Option<ModelParams<f64>>, fallback: ModelFamily) -> (ModelParams<f64>, Option<ModelFamily>) {
        let explicit = self.family.or(base.map(|b| b.family));
        let mut m = base.unwrap_or_else(default_model);
        m.family = explicit.unwrap_or(fallback);
        m.n = self.n.unwrap_or(m.n);
        m.k1 = self.k1.unwrap_or(m.k1);
        m.k2 = self.k2.unwrap_or(m.k2);
        m.beta1 = self.beta1.unwrap_or(m.beta1);
        m.beta2 = self.beta2.unwrap_or(m.beta2);
        m.c = self.c.unwrap_or(m.c);
        (m, explicit)
    }
}

impl Cli {
    fn specs(&self, checks: &[CheckKind], model: ModelParams<f64>, family: Option<ModelFamily>) -> Vec<CheckSpec> {
        checks
            .iter()
            .map(|&check| {
                let params = model.with_family(family.unwrap_or_else(|| check.default_family()));
                let mut spec = CheckSpec::new(check, params)
                    .with_seed(self.seed.unwrap_or(0))
                    .with_samples(self.samples.unwrap_or(DEFAULT_SAMPLES))
                    .with_guard(self.guard.unwrap_or(DEFAULT_SINGULAR_GUARD));
                if let Some(t) = self.tolerance {
                    spec = spec.with_tolerance(t);
                }
                spec
            })
            .collect()
    }

    fn apply_globals(&self, mut run: RunConfig) -> RunConfig {
        if self.output.is_some() {
            run.output_path = self.output.clone();
        }
        if let Some(f) = self.format {
            run.format = f;
        }
        for spec in &mut run.check_list {
            spec.seed = self.seed.unwrap_or(spec.seed);
            spec.samples = self.samples.unwrap_or(spec.samples);
            spec.tolerance = self.tolerance.unwrap_or(spec.tolerance);
            spec.guard = self.guard.unwrap_or(spec.guard);
        }
        if let Some(e) = &mut run.eval {
            e.seed = self.seed.unwrap_or(e.seed);
            e.samples = self.samples.unwrap_or(e.samples);
            e.guard = self.guard.unwrap_or(e.guard);
        }
        run
    }

    /// Merges `--config`, subcommand flags and global flags, then validates.
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let base = read_base(&self.config)?;
        let base_model = match &base {
            Base::None => None,
            Base::Model(m) => Some(*m),
            Base::Run(r) => Some(r.model),
        };
        let Some(sub) = &self.command else {
            return match base {
                Base::Run(run) => {
                    let run = self.apply_globals(*run);
                    run.validate()?;
                    Ok(run)
                }
                _ => Err(CliError::ConfigParse("no subcommand and no run config given".into())),
            };
        };
        let mut run = RunConfig {
            command: Command::Verify,
            model: default_model(),
            check_list: Vec::new(),
            sweep_grid: Vec::new(),
            output_path: self.output.clone(),
            format: self.format.unwrap_or_default(),
            eval: None,
            specfun: None,
        };
        match sub {
            Sub::Verify(a) => {
                let (model, family) = a.model.resolve(base_model, a.check[0].default_family());
                run.check_list = self.specs(&a.check, model, family);
                run.model = model;
            }
            Sub::Sweep(a) => {
                let (model, family) = a.model.resolve(base_model, a.check.default_family());
                run.command = Command::Sweep;
                run.check_list = self.specs(&[a.check], model, family);
                run.sweep_grid = a.grid.iter().flatten().copied().collect();
                run.model = model;
            }
            Sub::Eval(a) => {
                let (model, _) = a.model.resolve(base_model, ModelFamily::SusyUnitary);
                run.command = Command::Eval;
                run.model = model;
                run.eval = Some(EvalRequest {
                    function: a.function,
                    seed: self.seed.unwrap_or(0),
                    samples: self.samples.unwrap_or(DEFAULT_SAMPLES),
                    guard: self.guard.unwrap_or(DEFAULT_SINGULAR_GUARD),
                    points: a.point.clone(),
                    r11: a.r11,
                    r12: a.r12,
                    sign: a.sign,
                });
            }
            Sub::Specfun(a) => {
                run.command = Command::Specfun;
                if let Some(m) = base_model {
                    run.model = m;
                }
                let function = match a.hankel {
                    Some(1) => SpecialFunction::Hankel1,
                    Some(_) => SpecialFunction::Hankel2,
                    None => SpecialFunction::BesselJ,
                };
                run.specfun = Some(SpecfunRequest { function, nu: a.nu.clone(), z: a.z.clone() });
            }
        }
        run.validate()?;
        Ok(run)
    }
}

fn push(out: &mut Vec<String>, flag: &str, value: impl ToString) {
    out.push(format!("--{flag}"));
    out.push(value.to_string());
}

fn model_flags(out: &mut Vec<String>, m: &ModelParams<f64>, family: Option<ModelFamily>) {
    if let Some(f) = family {
        push(out, "family", f.name());
    }
    push(out, "n", m.n);
    push(out, "k1", m.k1);
    push(out, "k2", m.k2);
    push(out, "beta1", m.beta1);
    push(out, "beta2", m.beta2);
    out.push(format!("--c={}", rotation_str(m.c)));
}

fn not_expressible(what: &str) -> CliError {
    CliError::ConfigParse(format!("config cannot be expressed as flags: {what}"))
}

/// One value shared by every item, or an error.
fn uniform<T: PartialEq + Copy>(items: impl IntoIterator<Item = T>, what: &str) -> Result<T, CliError> {
    let mut it = items.into_iter();
    let first = it.next().ok_or_else(|| not_expressible(what))?;
    if it.all(|x| x == first) {
        Ok(first)
    } else {
        Err(not_expressible(what))
    }
}

fn check_flags(out: &mut Vec<String>, run: &RunConfig) -> Result<(), CliError> {
    let specs = &run.check_list;
    let first = specs.first().ok_or_else(|| not_expressible("empty check list"))?;
    let defaults = specs.iter().all(|s| s.params.family == s.check.default_family())
        && run.model.family == first.check.default_family();
    let family = if defaults {
        None
    } else {
        Some(uniform(specs.iter().map(|s| s.params.family).chain([run.model.family]), "mixed families")?)
    };
    if specs.iter().any(|s| s.params.with_family(run.model.family) != run.model) {
        return Err(not_expressible("per-check model parameters"));
    }
    model_flags(out, &run.model, family);
    push(out, "seed", uniform(specs.iter().map(|s| s.seed), "mixed seeds")?);
    push(out, "samples", uniform(specs.iter().map(|s| s.samples), "mixed sample counts")?);
    push(out, "guard", uniform(specs.iter().map(|s| s.guard), "mixed guards")?);
    if !specs.iter().all(|s| s.tolerance == s.check.default_tolerance()) {
        push(out, "tolerance", uniform(specs.iter().map(|s| s.tolerance), "mixed tolerances")?);
    }
    Ok(())
}

impl RunConfig {
    /// Flags that parse back to this config (without the program name).
    pub fn to_args(&self) -> Result<Vec<String>, CliError> {
        let mut out = Vec::new();
        match self.command {
            Command::Verify => {
                out.push("verify".into());
                let names: Vec<_> = self.check_list.iter().map(|s| s.check.name()).collect();
                push(&mut out, "check", names.join(","));
                check_flags(&mut out, self)?;
            }
            Command::Sweep => {
                out.push("sweep".into());
                let [spec] = self.check_list.as_slice() else {
                    return Err(not_expressible("sweep without exactly one check"));
                };
                push(&mut out, "check", spec.check.name());
                push(&mut out, "grid", grid_str(&self.sweep_grid));
                check_flags(&mut out, self)?;
            }
            Command::Eval => {
                out.push("eval".into());
                let e = self.eval.as_ref().ok_or_else(|| not_expressible("missing eval section"))?;
                model_flags(&mut out, &self.model, Some(self.model.family));
                push(&mut out, "function", e.function.to_possible_value().expect("no skipped variants").get_name());
                for p in &e.points {
                    if p.mirror_paired {
                        return Err(not_expressible("mirror-paired points"));
                    }
                    out.push(format!("--point={}", point_str(p)));
                }
                push(&mut out, "r11", e.r11);
                push(&mut out, "r12", e.r12);
                push(&mut out, "sign", sign_str(e.sign));
                push(&mut out, "seed", e.seed);
                push(&mut out, "samples", e.samples);
                push(&mut out, "guard", e.guard);
            }
            Command::Specfun => {
                out.push("specfun".into());
                let s = self.specfun.as_ref().ok_or_else(|| not_expressible("missing specfun section"))?;
                if self.model != default_model() {
                    return Err(not_expressible("model on a specfun run"));
                }
                match s.function {
                    SpecialFunction::Hankel1 => push(&mut out, "hankel", 1),
                    SpecialFunction::Hankel2 => push(&mut out, "hankel", 2),
                    SpecialFunction::BesselJ => out.push("--bessel".into()),
                }
                let nu: Vec<_> = s.nu.iter().map(f64::to_string).collect();
                out.push(format!("--nu={}", nu.join(",")));
                let z: Vec<_> = s.z.iter().map(|z| format_complex(*z)).collect();
                out.push(format!("--z={}", z.join(",")));
            }
        }
        if let Some(p) = &self.output_path {
            push(&mut out, "output", p.display());
        }
        push(&mut out, "format", self.format.to_possible_value().expect("no skipped variants").get_name());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(args: &[&str]) -> RunConfig {
        let cli = Cli::try_parse_from(std::iter::once("susy-calogero").chain(args.iter().copied())).unwrap();
        cli.into_config().unwrap()
    }

    fn round_trip(args: &[&str]) {
        let c = config(args);
        let flags = c.to_args().unwrap();
        let again = Cli::try_parse_from(std::iter::once("susy-calogero".to_string()).chain(flags.clone())).unwrap();
        assert_eq!(again.into_config().unwrap(), c, "flags {flags:?}");
    }

    #[test]
    fn verify_flags_map_onto_specs() {
        let c = config(&["verify", "--check", "similarity_unitary", "--k1", "1", "--k2", "1", "--beta1", "1", "--beta2", "4", "--seed", "7"]);
        assert_eq!(c.command, Command::Verify);
        let s = &c.check_list[0];
        assert_eq!((s.seed, s.samples, s.tolerance), (7, 100, 1e-8));
        assert_eq!(s.params.family, ModelFamily::SusyUnitary);
        let c = config(&["verify", "--check", "similarity_ordinary,cast_osp", "--c", "-i", "--tolerance", "1e-9"]);
        assert_eq!(c.check_list[0].params.family, ModelFamily::OrdinaryCs);
        assert_eq!(c.check_list[1].params.family, ModelFamily::SusyOsp);
        assert_eq!(c.model.c, Rotation::MinusI);
        assert!(c.check_list.iter().all(|s| s.tolerance == 1e-9));
    }

    #[test]
    fn sweep_grid_parses() {
        let c = config(&["sweep", "--check", "decoupling", "--grid", "2,2;3,3;0.5,0.5"]);
        assert_eq!(c.sweep_grid, vec![(2.0, 2.0), (3.0, 3.0), (0.5, 0.5)]);
        assert!(parse_grid("1,2,3").is_err());
    }

    #[test]
    fn points_parse() {
        let p = parse_point("-0.5,1.25;3").unwrap();
        assert_eq!((p.s1, p.s2), (vec![-0.5, 1.25], vec![3.0]));
        assert_eq!(parse_point("1").unwrap().s2, Vec::<f64>::new());
        assert!(parse_point("a;1").is_err());
    }

    #[test]
    fn flags_round_trip() {
        round_trip(&["verify", "--check", "similarity_unitary", "--seed", "7"]);
        round_trip(&["verify", "--check", "reduction,decoupling", "--family", "susy_unitary", "--beta1", "0.1", "--samples", "3", "--tolerance", "1e-6"]);
        round_trip(&["sweep", "--check", "decoupling", "--grid", "2,2;3,3;0.5,0.5", "--format", "csv", "--output", "x.csv"]);
        round_trip(&["eval", "--function", "psi11", "--point", "0.25,;1.5", "--sign", "minus", "--beta2", "9"]);
        round_trip(&["eval", "--family", "ordinary_cs", "--n", "3", "--point=-1,0.5,2", "--seed", "4"]);
        round_trip(&["specfun", "--hankel", "1", "--nu", "0.5,-2.25", "--z", "2+0i,-1-3e-7i"]);
        round_trip(&["specfun", "--bessel", "--nu", "3", "--z", "1e-3i"]);
    }

    #[test]
    fn config_errors() {
        let parse = |args: &[&str]| Cli::try_parse_from(std::iter::once("susy-calogero").chain(args.iter().copied())).unwrap().into_config();
        assert!(matches!(parse(&["verify", "--check", "decoupling", "--samples", "0"]), Err(CliError::ConfigParse(_))));
        assert!(matches!(parse(&["sweep", "--check", "decoupling", "--grid", ""]), Err(CliError::ConfigParse(_))));
        assert!(matches!(parse(&["verify", "--check", "decoupling", "--config", "/nonexistent/x.json"]), Err(CliError::Io(_))));
        assert!(matches!(parse(&[]), Err(CliError::ConfigParse(_))));
        assert!(Cli::try_parse_from(["susy-calogero", "verify", "--check", "nope"]).is_err());
    }
}
