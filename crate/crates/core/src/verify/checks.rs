use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::functions::{Bump, MirrorInduced, Polynomial, Restricted, DEFAULT_TERMS};
use super::sampling::{function_rng, Sampler};
use super::{rel_residual, CheckKind, CheckSpec, ResidualReport, RESIDUAL_EPSILON, SIMILARITY_FUNCTIONS};
use crate::autodiff::{all_jets, ScalarField};
use crate::error::{Error, Result};
use crate::jacobians::{log_c, LogJacobianField};
use crate::model::{
    check_dipole_constraint, derive_couplings, g_cross, solve_dipole,
    Configuration, Couplings, ModelFamily, ModelParams, Rotation,
};
use crate::num::CompensatedSum;
use crate::operators::{
    apply_calogero, apply_h_dipole2d, apply_h_tilde_osp, apply_h_tilde_unitary,
    apply_h_tilde_unitary_at, apply_h_two_band, apply_lb_ordinary, apply_lb_super, OperatorOutput,
    RotatedField,
};
use crate::quadrature::{for_each_tensor_node, gauss_legendre};
use crate::specfun::HankelKind;
use crate::wavefunctions::{from_schrodinger, Psi11Field, Psi11Params, Sign};

type C64 = Complex<f64>;
type Config = Configuration<f64>;
type Params = ModelParams<f64>;

/// Degree of the random test polynomials.
const TEST_DEGREE: u32 = 4;
/// Relative deviation tolerated by the mirror-evenness precondition.
const MIRROR_TOLERANCE: f64 = 1e-10;

fn samples(spec: &CheckSpec, params: &Params) -> Result<Vec<Config>> {
    Sampler::new(spec.seed, spec.guard).configurations(params, spec.samples)
}

fn require_arity<F: ScalarField<f64> + ?Sized>(f: &F, n: usize) -> Result<()> {
    if f.arity() != n {
        return Err(Error::ShapeMismatch {
            expected: format!("{n} coordinates"),
            got: format!("{}", f.arity()),
        });
    }
    Ok(())
}

fn with_layout(params: &Params, k1: usize, k2: usize) -> Params {
    Params { k1, k2, ..*params }
}

/// The operator belonging to `params.family`; the dipole model uses
/// [`default_dipole_couplings`].
pub fn apply_hamiltonian<F: ScalarField<f64> + ?Sized>(
    params: &Params,
    f: &F,
    s: &Config,
) -> Result<OperatorOutput<f64>> {
    match params.family {
        ModelFamily::OrdinaryCs => apply_calogero(params.beta1, f, s),
        ModelFamily::LbOrdinary => apply_lb_ordinary(params.beta1, f, s),
        ModelFamily::LbSuper => apply_lb_super(params, f, s),
        ModelFamily::SusyUnitary => apply_h_tilde_unitary(params, f, s),
        ModelFamily::TwoBand => apply_h_two_band(params, f, s),
        ModelFamily::SusyOsp => apply_h_tilde_osp(params, f, s),
        ModelFamily::Dipole2d => apply_h_dipole2d(params, &default_dipole_couplings(params)?, f, s),
    }
}

/// Dipole couplings with `σ = √(2|g12|)` (`σ = 1` when `g12 = 0`) and the
/// symmetric angles from [`solve_dipole`].
pub fn default_dipole_couplings(params: &Params) -> Result<Couplings<f64>> {
    let g12 = g_cross(params.beta1, params.beta2);
    let sigma = if g12 == 0.0 {
        1.0
    } else {
        (2.0 * g12.abs()).sqrt() * (1.0 + f64::EPSILON)
    };
    let (t1, t2) = solve_dipole(g12, sigma)?;
    derive_couplings(&params.with_family(ModelFamily::Dipole2d), sigma, t1, t2)
}

/// `(1/√β1) Σ [∂² + (∂ log C) ∂]_{s_p1} + (1/√β2) Σ [∂² + (∂ log C) ∂]_{s_p2}`.
fn laplace_beltrami_c<F: ScalarField<f64> + ?Sized>(params: &Params, f: &F, s: &Config) -> Result<C64> {
    let lc = log_c(params, s)?;
    let jets = all_jets(f, &s.complex_coords())?;
    let weight = |b: f64| if b > 0.0 { 1.0 / b.sqrt() } else { 0.0 };
    let (w1, w2) = (weight(params.beta1), weight(params.beta2));
    Ok(jets
        .iter()
        .zip(&lc.grad)
        .enumerate()
        .fold(C64::new(0.0, 0.0), |acc, (i, (j, g))| {
            acc + (j.dd + g * j.d) * if i < s.s1.len() { w1 } else { w2 }
        }))
}

/// `−J^{1/2} Δ[J^{−1/2} f]` against the Schrödinger-form operator.
pub fn check_similarity<F: ScalarField<f64> + ?Sized>(spec: &CheckSpec, test_fn: &F) -> Result<ResidualReport> {
    spec.validate()?;
    let p = spec.params;
    match spec.check {
        CheckKind::SimilarityOrdinary => p.require_family(&[ModelFamily::OrdinaryCs, ModelFamily::LbOrdinary])?,
        CheckKind::SimilarityUnitary => p.require_family(&[ModelFamily::SusyUnitary, ModelFamily::LbSuper])?,
        CheckKind::SimilarityOsp => p.require_family(&[ModelFamily::SusyOsp])?,
        other => return Err(Error::InvalidParams(format!("{other} is not a similarity check"))),
    }
    require_arity(test_fn, p.coordinate_count())?;
    let log_j = LogJacobianField::new(&p);
    let u = from_schrodinger(&p, test_fn)?;
    let points = samples(spec, &p)?;
    let residuals = points
        .par_iter()
        .map(|s| {
            let sqrt_j = (log_j.value_at(&s.complex_coords()) * 0.5).exp();
            let (lb, h) = match spec.check {
                CheckKind::SimilarityOrdinary => (
                    apply_lb_ordinary(p.beta1, &u, s)?.value,
                    apply_calogero(p.beta1, test_fn, s)?.value,
                ),
                CheckKind::SimilarityUnitary => {
                    let lp = p.with_family(ModelFamily::SusyUnitary);
                    (apply_lb_super(&lp, &u, s)?.value, apply_h_tilde_unitary(&lp, test_fn, s)?.value)
                }
                _ => (laplace_beltrami_c(&p, &u, s)?, apply_h_tilde_osp(&p, test_fn, s)?.value),
            };
            Ok((rel_residual(-sqrt_j * lb, h), s.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    ResidualReport::from_residuals(spec, residuals)
}

/// Two-band Hamiltonian on `f` against the Wick-rotated operator on
/// `σ ↦ f(σ1, i σ2)` at `σ2 = −i s2`.
pub fn check_rotation<F: ScalarField<f64> + ?Sized>(spec: &CheckSpec, test_fn: &F) -> Result<ResidualReport> {
    spec.validate()?;
    let p = spec.params;
    p.require_family(&[ModelFamily::TwoBand, ModelFamily::SusyUnitary, ModelFamily::LbSuper])?;
    if p.c != Rotation::PlusI {
        return Err(Error::InvalidParams("the rotation check needs c = +i".into()));
    }
    let (pt, pu) = (p.with_family(ModelFamily::TwoBand), p.with_family(ModelFamily::SusyUnitary));
    require_arity(test_fn, pt.coordinate_count())?;
    let rotated = RotatedField::new(test_fn, pt.k1);
    let points = samples(spec, &pt)?;
    let residuals = points
        .par_iter()
        .map(|s| {
            let two_band = apply_h_two_band(&pt, test_fn, s)?.value;
            let s1: Vec<C64> = s.s1.iter().map(|&x| C64::new(x, 0.0)).collect();
            let s2: Vec<C64> = s.s2.iter().map(|&y| C64::new(0.0, -y)).collect();
            let unitary = apply_h_tilde_unitary_at(&pu, &rotated, &s1, &s2)?.value;
            Ok((rel_residual(two_band, unitary), s.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    ResidualReport::from_residuals(spec, residuals)
}

fn mirror_deviation<F: ScalarField<f64> + ?Sized>(f: &F, s: &Config) -> f64 {
    let base = f.value_at(&s.complex_coords());
    let mut worst: f64 = 0.0;
    for (axis, len) in [(0, s.s1.len()), (1, s.s2.len())] {
        for pair in 0..len / 2 {
            let mut r = s.clone();
            let xs = if axis == 0 { &mut r.s1 } else { &mut r.s2 };
            xs[2 * pair] = -xs[2 * pair];
            xs[2 * pair + 1] = -xs[2 * pair + 1];
            worst = worst.max(rel_residual(base, f.value_at(&r.complex_coords())));
        }
    }
    worst
}

/// Dipole Hamiltonian on mirror-paired configurations against
/// `λ ·` (`OSp`-family operator on the induced pair function), `λ` fitted
/// by complex least squares and reported as `measured_constant` (real part).
pub fn check_cast_osp<F: ScalarField<f64> + ?Sized>(
    spec: &CheckSpec,
    test_fn: &F,
    couplings: &Couplings<f64>,
) -> Result<ResidualReport> {
    spec.validate()?;
    let p = spec.params;
    p.require_family(&[ModelFamily::SusyOsp, ModelFamily::Dipole2d])?;
    check_dipole_constraint(couplings.g12, couplings.sigma, couplings.theta1, couplings.theta2)?;
    let (op, dp) = (p.with_family(ModelFamily::SusyOsp), p.with_family(ModelFamily::Dipole2d));
    require_arity(test_fn, dp.coordinate_count())?;
    let induced = MirrorInduced::new(test_fn, op.k1, op.k2);
    let points = samples(spec, &dp)?;
    let pairs = points
        .par_iter()
        .map(|s| {
            let dev = mirror_deviation(test_fn, s);
            if dev > MIRROR_TOLERANCE {
                return Err(Error::MirrorSymmetryViolated(dev));
            }
            let full = apply_h_dipole2d(&dp, couplings, test_fn, s)?.value;
            let (a, b) = s.mirror_half();
            let reduced = apply_h_tilde_osp(&op, &induced, &Configuration::new(a, b))?.value;
            Ok((full, reduced))
        })
        .collect::<Result<Vec<_>>>()?;
    let (mut num, mut den) = (CompensatedSum::new(), 0.0);
    for (l, r) in &pairs {
        num.add(r.conj() * l);
        den += r.norm_sqr();
    }
    let lambda = if den > 0.0 { num.total() / den } else { C64::new(0.0, 0.0) };
    let residuals = pairs
        .iter()
        .zip(points)
        .map(|((l, r), s)| (rel_residual(*l, lambda * r), s))
        .collect();
    let mut report = ResidualReport::from_residuals(spec, residuals)?;
    report.measured_constant = Some(lambda.re);
    Ok(report)
}

/// `|H̃ψ11 − Eψ11| / (|E| |ψ11| + ε)` on the `ψ11` sampling region.
pub fn check_eigen_psi11(spec: &CheckSpec, psi: &Psi11Params<f64>) -> Result<ResidualReport> {
    let hp = Params::two_kind(ModelFamily::SusyUnitary, 1, 1, psi.beta1, psi.beta2).with_rotation(Rotation::PlusI);
    let spec = CheckSpec { params: hp, ..spec.clone() };
    spec.validate()?;
    let field = Psi11Field::new(*psi)?;
    let energy = psi.energy();
    let mut sampler = Sampler::new(spec.seed, spec.guard);
    let points: Vec<Config> = (0..spec.samples)
        .map(|_| {
            let (a, b) = sampler.psi_point();
            Configuration::new(vec![a], vec![b])
        })
        .collect();
    let residuals = points
        .par_iter()
        .map(|s| {
            let out = apply_h_tilde_unitary(&hp, &field, s)?;
            let v = field.value_at(&s.complex_coords());
            let r = (out.value - v * energy).norm() / (energy.abs() * v.norm() + RESIDUAL_EPSILON);
            Ok((r, s.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    ResidualReport::from_residuals(&spec, residuals)
}

/// Axis-aligned integration box with a Gauss–Legendre rule per axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub nodes: usize,
}

impl Domain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, nodes: usize) -> Result<Self> {
        if lo.len() != hi.len() || lo.iter().zip(&hi).any(|(a, b)| !(a < b)) || nodes == 0 {
            return Err(Error::InvalidParams("domain needs lo < hi per axis and nodes >= 1".into()));
        }
        Ok(Self { lo, hi, nodes })
    }

    /// Coordinate `i` on `[1 + 2i, 2 + 2i]`; 32 nodes per axis up to two
    /// dimensions, 16 up to four, 8 beyond.
    pub fn default_for(params: &Params) -> Self {
        let dim = params.coordinate_count();
        let nodes = match dim {
            0..=2 => 32,
            3..=4 => 16,
            _ => 8,
        };
        Self {
            lo: (0..dim).map(|i| 1.0 + 2.0 * i as f64).collect(),
            hi: (0..dim).map(|i| 2.0 + 2.0 * i as f64).collect(),
            nodes,
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Lower bound over the box of every pole-generating expression, in
    /// the coordinate units of [`crate::model::singular_distance`].
    pub fn singular_distance(&self, params: &Params) -> f64 {
        let k1 = params.layout().0;
        let iv: Vec<(f64, f64)> = self.lo.iter().zip(&self.hi).map(|(&a, &b)| (a, b)).collect();
        let (s1, s2) = iv.split_at(k1.min(iv.len()));
        let abs_min = |(a, b): (f64, f64)| if a > 0.0 { a } else if b < 0.0 { -b } else { 0.0 };
        let diff = |x: (f64, f64), y: (f64, f64)| abs_min((x.0 - y.1, x.1 - y.0));
        let sum = |x: (f64, f64), y: (f64, f64)| abs_min((x.0 + y.0, x.1 + y.1));
        let radial = |x: (f64, f64), y: (f64, f64)| abs_min(x).hypot(abs_min(y));
        let mut d = f64::INFINITY;
        let pairs = |xs: &[(f64, f64)], d: &mut f64, squares: bool| {
            for p in 0..xs.len() {
                for q in p + 1..xs.len() {
                    *d = d.min(diff(xs[p], xs[q]));
                    if squares {
                        *d = d.min(sum(xs[p], xs[q]));
                    }
                }
            }
        };
        let cross = |d: &mut f64, f: &dyn Fn((f64, f64), (f64, f64)) -> f64| {
            for &a in s1 {
                for &b in s2 {
                    *d = d.min(f(a, b));
                }
            }
        };
        match params.family {
            ModelFamily::OrdinaryCs | ModelFamily::LbOrdinary => pairs(s1, &mut d, false),
            ModelFamily::TwoBand => {
                pairs(s1, &mut d, false);
                pairs(s2, &mut d, false);
                cross(&mut d, &diff);
            }
            ModelFamily::LbSuper | ModelFamily::SusyUnitary => {
                pairs(s1, &mut d, false);
                pairs(s2, &mut d, false);
                cross(&mut d, &radial);
            }
            ModelFamily::SusyOsp | ModelFamily::Dipole2d => {
                let osp = params.family == ModelFamily::SusyOsp;
                pairs(s1, &mut d, osp);
                pairs(s2, &mut d, osp);
                let singles: &[(f64, f64)] = if osp { s2 } else { &iv };
                for &x in singles {
                    d = d.min(abs_min(x));
                }
                cross(&mut d, &|a, b| radial(a, b).sqrt());
            }
        }
        d
    }
}

fn split(params: &Params, x: &[f64]) -> Config {
    let k1 = params.layout().0;
    Configuration::new(x[..k1].to_vec(), x[k1..].to_vec())
}

/// `|⟨f, Hg⟩ − ⟨Hf, g⟩| / (|⟨f, Hg⟩| + |⟨Hf, g⟩| + ε)` with the
/// sesquilinear `L²` product, by tensor Gauss–Legendre quadrature.
pub fn check_hermiticity<F, G>(spec: &CheckSpec, f: &F, g: &G, domain: &Domain) -> Result<ResidualReport>
where
    F: ScalarField<f64> + ?Sized,
    G: ScalarField<f64> + ?Sized,
{
    spec.validate()?;
    let p = spec.params;
    let dim = p.coordinate_count();
    if domain.dim() != dim {
        return Err(Error::ShapeMismatch {
            expected: format!("{dim}-dimensional box"),
            got: format!("{}", domain.dim()),
        });
    }
    require_arity(f, dim)?;
    require_arity(g, dim)?;
    let rules: Vec<_> = (0..dim)
        .map(|i| gauss_legendre(domain.nodes, domain.lo[i], domain.hi[i]))
        .collect();
    if domain.singular_distance(&p) < spec.guard.max(f64::MIN_POSITIVE) {
        return Err(Error::DomainTouchesSingularSet);
    }
    let mut nodes = Vec::new();
    for_each_tensor_node(&rules, |x, w| nodes.push((x.to_vec(), w)));
    let terms = nodes
        .par_iter()
        .map(|(x, w)| {
            let s = split(&p, x);
            let point = s.complex_coords();
            let (fv, gv) = (f.value_at(&point), g.value_at(&point));
            let hf = apply_hamiltonian(&p, f, &s)?.value;
            let hg = apply_hamiltonian(&p, g, &s)?.value;
            Ok((fv.conj() * hg * *w, hf.conj() * gv * *w))
        })
        .collect::<Result<Vec<_>>>()?;
    let (mut a, mut b) = (CompensatedSum::new(), CompensatedSum::new());
    for (x, y) in terms {
        a.add(x);
        b.add(y);
    }
    let centre: Vec<f64> = domain.lo.iter().zip(&domain.hi).map(|(l, h)| 0.5 * (l + h)).collect();
    ResidualReport::from_residuals(spec, vec![(rel_residual(a.total(), b.total()), split(&p, &centre))])
}

fn flip(s: &Config, index: usize) -> Config {
    let mut r = s.clone();
    if index < r.s1.len() {
        r.s1[index] = -r.s1[index];
    } else {
        let k1 = r.s1.len();
        r.s2[index - k1] = -r.s2[index - k1];
    }
    r
}

/// Decoupling at `β1 = β2`, sign-flip invariance of the `OSp`-family
/// operator and the single-kind reduction to the ordinary model.
pub fn check_structure(spec: &CheckSpec) -> Result<ResidualReport> {
    spec.validate()?;
    let p = spec.params;
    let mut rng = function_rng(spec.seed);
    let zero = C64::new(0.0, 0.0);
    let residuals = match spec.check {
        CheckKind::Decoupling => {
            p.require_family(&[ModelFamily::SusyUnitary, ModelFamily::TwoBand, ModelFamily::SusyOsp])?;
            let (k1, k2) = p.layout();
            let f = Polynomial::random(&mut rng, k1 + k2, TEST_DEGREE, DEFAULT_TERMS);
            samples(spec, &p)?
                .into_par_iter()
                .map(|s| {
                    let out = apply_hamiltonian(&p, &f, &s)?;
                    let point = s.complex_coords();
                    let a = if k1 > 0 {
                        let f1 = Restricted::new(&f, point.clone(), 0, k1);
                        apply_hamiltonian(&with_layout(&p, k1, 0), &f1, &Configuration::new(s.s1.clone(), vec![]))?.value
                    } else {
                        zero
                    };
                    let b = if k2 > 0 {
                        let f2 = Restricted::new(&f, point, k1, k2);
                        apply_hamiltonian(&with_layout(&p, 0, k2), &f2, &Configuration::new(vec![], s.s2.clone()))?.value
                    } else {
                        zero
                    };
                    let r = ((out.value - a - b).norm() + out.cross_part.norm())
                        / (out.value.norm() + (a + b).norm() + RESIDUAL_EPSILON);
                    Ok((r, s))
                })
                .collect::<Result<Vec<_>>>()?
        }
        CheckKind::SignFlip => {
            p.require_family(&[ModelFamily::SusyOsp])?;
            let dim = p.coordinate_count();
            let f = Polynomial::random_even(&mut rng, dim, TEST_DEGREE, DEFAULT_TERMS);
            samples(spec, &p)?
                .into_par_iter()
                .map(|s| {
                    let base = apply_h_tilde_osp(&p, &f, &s)?.value;
                    let mut worst: f64 = 0.0;
                    for i in 0..dim {
                        let flipped = apply_h_tilde_osp(&p, &f, &flip(&s, i))?.value;
                        worst = worst.max(rel_residual(base, flipped));
                    }
                    Ok((worst, s))
                })
                .collect::<Result<Vec<_>>>()?
        }
        CheckKind::Reduction => {
            p.require_family(&[ModelFamily::SusyUnitary])?;
            let mut all = Vec::new();
            for (n, beta, first) in [(p.k1, p.beta1, true), (p.k2, p.beta2, false)] {
                if n == 0 {
                    continue;
                }
                let single = if first { with_layout(&p, n, 0) } else { with_layout(&p, 0, n) };
                let ordinary = Params::ordinary(ModelFamily::OrdinaryCs, n, beta);
                let f = Polynomial::random(&mut rng, n, TEST_DEGREE, DEFAULT_TERMS);
                let sub = CheckSpec { params: ordinary, ..spec.clone() };
                let mut part = samples(&sub, &ordinary)?
                    .into_par_iter()
                    .map(|x| {
                        let s = if first {
                            Configuration::new(x.s1.clone(), vec![])
                        } else {
                            Configuration::new(vec![], x.s1.clone())
                        };
                        let a = apply_h_tilde_unitary(&single, &f, &s)?.value;
                        let b = apply_calogero(beta, &f, &x)?.value / beta.sqrt();
                        Ok((rel_residual(a, b), s))
                    })
                    .collect::<Result<Vec<_>>>()?;
                all.append(&mut part);
            }
            all
        }
        other => return Err(Error::InvalidParams(format!("{other} is not a structure check"))),
    };
    ResidualReport::from_residuals(spec, residuals)
}

/// Runs `spec` with the default seeded test functions: five random
/// degree-4 polynomials per similarity cell, one polynomial for rotation,
/// an even polynomial for the cast identity, both consistent `ψ11`
/// pairings at `r = (1, 1)`, and polynomial bumps on
/// [`Domain::default_for`] for hermiticity.
pub fn run_check(spec: &CheckSpec) -> Result<ResidualReport> {
    spec.validate()?;
    let p = spec.params;
    let mut rng = function_rng(spec.seed);
    match spec.check {
        CheckKind::SimilarityOrdinary | CheckKind::SimilarityUnitary | CheckKind::SimilarityOsp => {
            let reports = (0..SIMILARITY_FUNCTIONS)
                .map(|_| {
                    let f = Polynomial::random(&mut rng, p.coordinate_count(), TEST_DEGREE, DEFAULT_TERMS);
                    check_similarity(spec, &f)
                })
                .collect::<Result<Vec<_>>>()?;
            ResidualReport::merge(reports)
        }
        CheckKind::RotationEquivalence => {
            let f = Polynomial::random(&mut rng, p.coordinate_count(), TEST_DEGREE, DEFAULT_TERMS);
            check_rotation(spec, &f)
        }
        CheckKind::CastOsp => {
            let dp = p.with_family(ModelFamily::Dipole2d);
            let couplings = default_dipole_couplings(&dp)?;
            let f = Polynomial::random_even(&mut rng, dp.coordinate_count(), TEST_DEGREE, DEFAULT_TERMS);
            check_cast_osp(spec, &f, &couplings)
        }
        CheckKind::EigenPsi11 => {
            let plus = Psi11Params::paired(p.beta1, p.beta2, 1.0, 1.0, Sign::Plus)?;
            let minus = Psi11Params::paired(p.beta1, p.beta2, 1.0, 1.0, Sign::Minus)?;
            debug_assert_eq!(minus.kind, HankelKind::First);
            ResidualReport::merge(vec![check_eigen_psi11(spec, &plus)?, check_eigen_psi11(spec, &minus)?])
        }
        CheckKind::Hermiticity => {
            let domain = Domain::default_for(&p);
            let bump = |rng: &mut _| {
                let poly = Polynomial::random(rng, domain.dim(), 2, 4);
                Bump::new(domain.lo.clone(), domain.hi.clone(), 4, poly)
            };
            let (f, g) = (bump(&mut rng), bump(&mut rng));
            check_hermiticity(spec, &f, &g, &domain)
        }
        CheckKind::Decoupling | CheckKind::SignFlip | CheckKind::Reduction => check_structure(spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autodiff::FnField;
    use crate::autodiff::CSecond;

    fn spec(check: CheckKind, params: Params) -> CheckSpec {
        CheckSpec::new(check, params).with_seed(7).with_samples(20)
    }

    #[test]
    fn single_particle_similarity_is_exact() {
        let p = Params::ordinary(ModelFamily::OrdinaryCs, 1, 2.0);
        let r = run_check(&spec(CheckKind::SimilarityOrdinary, p)).unwrap();
        assert!(r.max_rel_residual <= 1e-15, "{}", r.max_rel_residual);
    }

    #[test]
    fn similarity_cells() {
        let cells = [
            (CheckKind::SimilarityOrdinary, Params::ordinary(ModelFamily::OrdinaryCs, 3, 1.0)),
            (CheckKind::SimilarityUnitary, Params::two_kind(ModelFamily::SusyUnitary, 1, 1, 1.0, 4.0)),
            (
                CheckKind::SimilarityUnitary,
                Params::two_kind(ModelFamily::SusyUnitary, 2, 2, 0.5, 2.0).with_rotation(Rotation::MinusI),
            ),
            (CheckKind::SimilarityOsp, Params::two_kind(ModelFamily::SusyOsp, 2, 1, 4.0, 1.0)),
        ];
        for (check, p) in cells {
            let r = run_check(&spec(check, p)).unwrap();
            assert!(r.passed, "{check} {:?}: {}", p, r.max_rel_residual);
        }
    }

    #[test]
    fn similarity_detects_wrong_operator() {
        let p = Params::two_kind(ModelFamily::SusyUnitary, 1, 1, 1.0, 4.0);
        let f = FnField::new(2, |x: &[CSecond<f64>]| x[0] * x[1] + x[0].powi(3));
        let mut s = spec(CheckKind::SimilarityUnitary, p);
        assert!(check_similarity(&s, &f).unwrap().passed);
        s.check = CheckKind::SimilarityOsp;
        assert!(matches!(check_similarity(&s, &f), Err(Error::WrongFamily { .. })));
    }

    #[test]
    fn rotation_kinetic_only_is_exact() {
        let p = Params::two_kind(ModelFamily::TwoBand, 1, 1, 2.0, 2.0);
        let r = run_check(&spec(CheckKind::RotationEquivalence, p)).unwrap();
        assert!(r.max_rel_residual <= 1e-12);
        let p = Params::two_kind(ModelFamily::TwoBand, 1, 1, 1.0, 4.0);
        assert!(run_check(&spec(CheckKind::RotationEquivalence, p)).unwrap().passed);
        let bad = p.with_rotation(Rotation::MinusI);
        assert!(run_check(&spec(CheckKind::RotationEquivalence, bad)).is_err());
    }

    #[test]
    fn eigen_check_both_pairings() {
        let p = Params::two_kind(ModelFamily::SusyUnitary, 1, 1, 1.0, 9.0);
        let r = run_check(&spec(CheckKind::EigenPsi11, p)).unwrap();
        assert!(r.passed, "{}", r.max_rel_residual);
        let eq = Params::two_kind(ModelFamily::SusyUnitary, 1, 1, 2.0, 2.0);
        assert_eq!(run_check(&spec(CheckKind::EigenPsi11, eq)), Err(Error::EqualBetas));
    }

    #[test]
    fn hermiticity_two_band_and_unitary() {
        let p = Params::two_kind(ModelFamily::TwoBand, 1, 1, 1.0, 4.0);
        let r = run_check(&spec(CheckKind::Hermiticity, p)).unwrap();
        assert!(r.passed, "{}", r.max_rel_residual);
        let u = p.with_family(ModelFamily::SusyUnitary);
        let r = run_check(&spec(CheckKind::Hermiticity, u)).unwrap();
        assert!(r.max_rel_residual >= 1e-3, "{}", r.max_rel_residual);
    }

    #[test]
    fn hermiticity_rejects_singular_box() {
        let p = Params::two_kind(ModelFamily::TwoBand, 1, 1, 1.0, 4.0);
        let f = FnField::new(2, |x: &[CSecond<f64>]| x[0]);
        let d = Domain::new(vec![0.0, 0.5], vec![1.0, 1.5], 4).unwrap();
        assert_eq!(
            check_hermiticity(&spec(CheckKind::Hermiticity, p), &f, &f, &d),
            Err(Error::DomainTouchesSingularSet)
        );
    }

    #[test]
    fn structure_checks() {
        let eq = Params::two_kind(ModelFamily::SusyUnitary, 2, 1, 3.0, 3.0);
        assert!(run_check(&spec(CheckKind::Decoupling, eq)).unwrap().passed);
        let neq = Params::two_kind(ModelFamily::SusyUnitary, 2, 1, 1.0, 3.0);
        assert!(!run_check(&spec(CheckKind::Decoupling, neq)).unwrap().passed);
        let osp = Params::two_kind(ModelFamily::SusyOsp, 2, 2, 4.0, 1.0);
        assert!(run_check(&spec(CheckKind::SignFlip, osp)).unwrap().max_rel_residual <= 1e-12);
        assert!(run_check(&spec(CheckKind::Reduction, neq)).unwrap().passed);
    }

    #[test]
    fn cast_reports_constant_and_rejects_odd_functions() {
        let p = Params::two_kind(ModelFamily::SusyOsp, 1, 1, 4.0, 1.0);
        let r = run_check(&spec(CheckKind::CastOsp, p)).unwrap();
        assert!(r.measured_constant.is_some());
        let odd = FnField::new(4, |x: &[CSecond<f64>]| x[1] + x[0].powi(2));
        let cp = default_dipole_couplings(&p).unwrap();
        assert!(matches!(
            check_cast_osp(&spec(CheckKind::CastOsp, p), &odd, &cp),
            Err(Error::MirrorSymmetryViolated(_))
        ));
    }

    #[test]
    fn reports_are_deterministic() {
        let p = Params::two_kind(ModelFamily::SusyUnitary, 2, 1, 0.5, 4.0);
        let s = spec(CheckKind::SimilarityUnitary, p);
        let a = serde_json::to_string(&run_check(&s).unwrap()).unwrap();
        let b = serde_json::to_string(&run_check(&s).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
