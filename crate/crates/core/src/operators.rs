//! Pointwise application of the second-order operators.
//!
//! Derivatives come from [`CSecond`] jets of the test field, so every
//! result is exact up to rounding. Each operator returns the kinetic and
//! potential contributions separately; `cross_part` is the share of
//! `potential_part` coupling the two coordinate kinds.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::autodiff::{all_jets, CSecond, ScalarField};
use crate::error::{Error, Result};
use crate::jacobians::{log_b_at, log_vandermonde};
use crate::model::{
    check_dipole_constraint, derive_couplings, g_cross, g_same, h_cross, Configuration,
    Couplings, ModelFamily, ModelParams,
};
use crate::num::{imag_unit, lit, real, Real};

/// Result of applying an operator to a field at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorOutput<T: Real> {
    pub value: Complex<T>,
    pub kinetic_part: Complex<T>,
    pub potential_part: Complex<T>,
    pub cross_part: Complex<T>,
}

impl<T: Real> OperatorOutput<T> {
    fn assemble(kinetic: Complex<T>, potential: Complex<T>, cross: Complex<T>) -> Self {
        Self {
            value: kinetic + potential,
            kinetic_part: kinetic,
            potential_part: potential,
            cross_part: cross,
        }
    }
}

/// Sign of the `g11` term of the `OSp`-family operator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OspConvention {
    /// `+g11`, the sign produced by the similarity transform with `C`.
    #[default]
    Derived,
    /// `−g11`, kept for comparison.
    AsPrinted,
}

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn to_complex<T: Real>(xs: &[T]) -> Vec<Complex<T>> {
    xs.iter().map(|&x| real(x)).collect()
}

fn concat<T: Real>(s1: &[Complex<T>], s2: &[Complex<T>]) -> Vec<Complex<T>> {
    s1.iter().chain(s2).copied().collect()
}

/// `1/d²`, rejecting an exactly vanishing denominator.
fn inv_sq<T: Real>(d: Complex<T>) -> Result<Complex<T>> {
    if d == zero() {
        return Err(Error::SingularConfiguration);
    }
    Ok((d * d).inv())
}

fn inv<T: Real>(d: Complex<T>) -> Result<Complex<T>> {
    if d == zero() {
        return Err(Error::SingularConfiguration);
    }
    Ok(d.inv())
}

fn jets<T: Real, F: ScalarField<T> + ?Sized>(f: &F, point: &[Complex<T>]) -> Result<Vec<CSecond<T>>> {
    let jets = all_jets(f, point)?;
    if jets.iter().any(|j| !j.is_finite()) {
        return Err(Error::SingularConfiguration);
    }
    Ok(jets)
}

fn value_of<T: Real, F: ScalarField<T> + ?Sized>(
    f: &F,
    point: &[Complex<T>],
    jets: &[CSecond<T>],
) -> Complex<T> {
    jets.first().map(|j| j.v).unwrap_or_else(|| f.value_at(point))
}

fn ordinary_coords<T: Real>(x: &Configuration<T>) -> Result<&[T]> {
    if !x.s2.is_empty() {
        return Err(Error::ShapeMismatch {
            expected: "no second coordinate set".into(),
            got: format!("{} entries in s2", x.s2.len()),
        });
    }
    Ok(&x.s1)
}

/// `−Σ ∂²f/∂x_n² + β(β/2 − 1) Σ_{n<m} f/(x_n − x_m)²`.
pub fn apply_calogero<T: Real, F: ScalarField<T> + ?Sized>(
    beta: T,
    f: &F,
    x: &Configuration<T>,
) -> Result<OperatorOutput<T>> {
    let xs = to_complex(ordinary_coords(x)?);
    let jets = jets(f, &xs)?;
    let fv = value_of(f, &xs, &jets);
    let kinetic = -jets.iter().fold(zero(), |a, j| a + j.dd);
    let g = beta * (beta / lit(2.0) - T::one());
    let mut v = zero();
    for n in 0..xs.len() {
        for m in n + 1..xs.len() {
            v = v + inv_sq(xs[n] - xs[m])?;
        }
    }
    Ok(OperatorOutput::assemble(kinetic, v * g * fv, zero()))
}

/// `Σ_n [∂²f/∂x_n² + β (Σ_{m≠n} 1/(x_n − x_m)) ∂f/∂x_n]`; the first-order
/// drift is reported as `potential_part`.
pub fn apply_lb_ordinary<T: Real, F: ScalarField<T> + ?Sized>(
    beta: T,
    f: &F,
    x: &Configuration<T>,
) -> Result<OperatorOutput<T>> {
    let coords = ordinary_coords(x)?;
    if !(beta >= T::zero()) {
        return Err(Error::InvalidParams(format!("beta = {beta} must be >= 0")));
    }
    let xs = to_complex(coords);
    let jets = jets(f, &xs)?;
    let lj = log_vandermonde(beta, coords)?;
    let kinetic = jets.iter().fold(zero(), |a, j| a + j.dd);
    let drift = jets.iter().zip(&lj.grad).fold(zero(), |a, (j, g)| a + j.d * g);
    Ok(OperatorOutput::assemble(kinetic, drift, zero()))
}

fn kinetic_weights<T: Real>(params: &ModelParams<T>) -> (T, T) {
    let w = |b: T| if b > T::zero() { b.sqrt().recip() } else { T::zero() };
    (w(params.beta1), w(params.beta2))
}

fn shape_and_betas<T: Real>(params: &ModelParams<T>, s: &Configuration<T>) -> Result<()> {
    params.validate()?;
    s.check_shape(params)?;
    params.require_positive_betas()
}

/// `(1/√β1) Σ_p [∂² + (∂ log B) ∂]_{s_p1} + (1/√β2) Σ_p [∂² + (∂ log B) ∂]_{s_p2}`.
pub fn apply_lb_super<T: Real, F: ScalarField<T> + ?Sized>(
    params: &ModelParams<T>,
    f: &F,
    s: &Configuration<T>,
) -> Result<OperatorOutput<T>> {
    params.require_family(&[ModelFamily::LbSuper, ModelFamily::SusyUnitary])?;
    shape_and_betas(params, s)?;
    let (s1, s2) = (to_complex(&s.s1), to_complex(&s.s2));
    let lb = log_b_at(params, &s1, &s2)?;
    let jets = jets(f, &concat(&s1, &s2))?;
    let (w1, w2) = kinetic_weights(params);
    let k1 = s1.len();
    let (mut kinetic, mut drift) = (zero(), zero());
    for (i, (j, g)) in jets.iter().zip(&lb.grad).enumerate() {
        let w = if i < k1 { w1 } else { w2 };
        kinetic = kinetic + j.dd * w;
        drift = drift + j.d * *g * w;
    }
    Ok(OperatorOutput::assemble(kinetic, drift, zero()))
}

/// Potential of the Wick-rotated operator at (possibly complex) points:
/// `(V, V_cross)` with `V = Σ g11/(Δs1)² + Σ g22/(Δs2)² − Σ g12/(s_p1 − c s_q2)²`.
pub fn potential_unitary_at<T: Real>(
    params: &ModelParams<T>,
    s1: &[Complex<T>],
    s2: &[Complex<T>],
) -> Result<(Complex<T>, Complex<T>)> {
    let g11 = g_same(params.beta1);
    let g22 = g_same(params.beta2);
    let g12 = g_cross(params.beta1, params.beta2);
    let c = params.c.value::<T>();
    let mut same = zero::<T>();
    for (xs, g) in [(s1, g11), (s2, g22)] {
        for p in 0..xs.len() {
            for q in p + 1..xs.len() {
                same = same + inv_sq(xs[p] - xs[q])? * g;
            }
        }
    }
    let mut cross = zero::<T>();
    for a in s1 {
        for b in s2 {
            cross = cross - inv_sq(*a - c * *b)? * g12;
        }
    }
    Ok((same + cross, cross))
}

/// The non-Hermitean two-kind operator
/// `−(1/√β1)Σ∂²_{s_p1} − (1/√β2)Σ∂²_{s_p2} + V`, see [`potential_unitary_at`].
pub fn apply_h_tilde_unitary<T: Real, F: ScalarField<T> + ?Sized>(
    params: &ModelParams<T>,
    f: &F,
    s: &Configuration<T>,
) -> Result<OperatorOutput<T>> {
    s.check_shape(params)?;
    apply_h_tilde_unitary_at(params, f, &to_complex(&s.s1), &to_complex(&s.s2))
}

/// [`apply_h_tilde_unitary`] at complex coordinates.
pub fn apply_h_tilde_unitary_at<T: Real, F: ScalarField<T> + ?Sized>(
    params: &ModelParams<T>,
    f: &F,
    s1: &[Complex<T>],
    s2: &[Complex<T>],
) -> Result<OperatorOutput<T>> {
    params.require_family(&[ModelFamily::LbSuper, ModelFamily::SusyUnitary])?;
    params.validate()?;
    let (k1, k2) = params.layout();
    if s1.len() != k1 || s2.len() != k2 {
        return Err(Error::ShapeMismatch {
            expected: format!("({k1}, {k2})"),
            got: format!("({}, {})", s1.len(), s2.len()),
        });
    }
    params.require_positive_betas()?;
    let point = concat(s1, s2);
    let jets = jets(f, &point)?;
    let fv = value_of(f, &point, &jets);
    let (w1, w2) = kinetic_weights(params);
    let kinetic = jets
        .iter()
        .enumerate()
        .fold(zero(), |a, (i, j)| a - j.dd * if i < k1 { w1 } else { w2 });
    let (v, cross) = potential_unitary_at(params, s1, s2)?;
    Ok(OperatorOutput::assemble(kinetic, v * fv, cross * fv))
}

/// Potential of the Hermitean two-band Hamiltonian:
/// `Σ g11/(Δs1)² − Σ g22/(Δs2)² − Σ g12/(s_p1 − s_q2)²`.
pub fn potential_two_band<T: Real>(
    params: &ModelParams<T>,
    s1: &[Complex<T>],
    s2: &[Complex<T>],
) -> Result<(Complex<T>, Complex<T>)> {
    let g11 = g_same(params.beta1);
    let g22 = g_same(params.beta2);
    let g12 = g_cross(params.beta1, params.beta2);
    let mut same = zero::<T>();
    for (xs, g) in [(s1, g11), (s2, -g22)] {
        for p in 0..xs.len() {
            for q in p + 1..xs.len() {
                same = same + inv_sq(xs[p] - xs[q])? * g;
            }
        }
    }
    let mut cross = zero::<T>();
    for a in s1 {
        for b in s2 {
            cross = cross - inv_sq(*a - *b)? * g12;
        }
    }
    Ok((same + cross, cross))
}

/// Two-band Hamiltonian `Σ π²/(2m1) + Σ π²/(2m2) + V` with `π² = −∂²`,
/// `m1 = √(β1/4)`, `m2 = −√(β2/4)`.
pub fn apply_h_two_band<T: Real, F: ScalarField<T> + ?Sized>(
    params: &ModelParams<T>,
    f: &F,
    s: &Configuration<T>,
) -> Result<OperatorOutput<T>> {
    params.require_family(&[ModelFamily::TwoBand])?;
    shape_and_betas(params, s)?;
    let c = derive_couplings(params, T::zero(), T::zero(), T::zero())?;
    let (s1, s2) = (to_complex(&s.s1), to_complex(&s.s2));
    let point = concat(&s1, &s2);
    let jets = jets(f, &point)?;
    let fv = value_of(f, &point, &jets);
    let two = lit::<T>(2.0);
    let inv_mass = |m: T| if m != T::zero() { (two * m).recip() } else { T::zero() };
    let (a1, a2) = (inv_mass(c.m1), inv_mass(c.m2));
    let kinetic = jets
        .iter()
        .enumerate()
        .fold(zero(), |acc, (i, j)| acc - j.dd * if i < s1.len() { a1 } else { a2 });
    let (v, cross) = potential_two_band(params, &s1, &s2)?;
    Ok(OperatorOutput::assemble(kinetic, v * fv, cross * fv))
}

/// Potential of the `OSp`-family operator in the `k1 + k2` picture.
pub fn potential_osp<T: Real>(
    params: &ModelParams<T>,
    s1: &[Complex<T>],
    s2: &[Complex<T>],
    convention: OspConvention,
) -> Result<(Complex<T>, Complex<T>)> {
    let (b1, b2) = (params.beta1, params.beta2);
    let g11 = match convention {
        OspConvention::Derived => g_same(b1),
        OspConvention::AsPrinted => -g_same(b1),
    };
    let g22 = g_same(b2);
    let g12 = g_cross(b1, b2);
    let h12 = h_cross(b1, b2);
    let two = lit::<T>(2.0);
    let mut same = zero::<T>();
    for (xs, g) in [(s1, g11), (s2, g22)] {
        for p in 0..xs.len() {
            for q in p + 1..xs.len() {
                let (x2, y2) = (xs[p] * xs[p], xs[q] * xs[q]);
                same = same + (x2 + y2) * two * inv_sq(x2 - y2)? * g;
            }
        }
    }
    for y in s2 {
        same = same + inv(*y * *y * two)? * g22;
    }
    let mut cross = zero::<T>();
    for x in s1 {
        for y in s2 {
            let (x2, y2) = (*x * *x, *y * *y);
            let r2 = x2 + y2;
            cross = cross - (x2 - y2) * two * inv_sq(r2)? * g12 + inv(r2)? * (two * h12);
        }
    }
    Ok((same + cross, cross))
}

/// `OSp`-family operator with the derived `+g11` sign.
pub fn apply_h_tilde_osp<T: Real, F: ScalarField<T> + ?Sized>(
    params: &ModelParams<T>,
    f: &F,
    s: &Configuration<T>,
) -> Result<OperatorOutput<T>> {
    apply_h_tilde_osp_with(params, f, s, OspConvention::Derived)
}

/// `OSp`-family operator with an explicit `g11` sign convention.
pub fn apply_h_tilde_osp_with<T: Real, F: ScalarField<T> + ?Sized>(
    params: &ModelParams<T>,
    f: &F,
    s: &Configuration<T>,
    convention: OspConvention,
) -> Result<OperatorOutput<T>> {
    params.require_family(&[ModelFamily::SusyOsp])?;
    shape_and_betas(params, s)?;
    let (s1, s2) = (to_complex(&s.s1), to_complex(&s.s2));
    let point = concat(&s1, &s2);
    let jets = jets(f, &point)?;
    let fv = value_of(f, &point, &jets);
    let (w1, w2) = kinetic_weights(params);
    let kinetic = jets
        .iter()
        .enumerate()
        .fold(zero(), |a, (i, j)| a - j.dd * if i < s1.len() { w1 } else { w2 });
    let (v, cross) = potential_osp(params, &s1, &s2, convention)?;
    Ok(OperatorOutput::assemble(kinetic, v * fv, cross * fv))
}

/// Unit vector from `(x, 0)` to `(0, y)`.
pub fn e_pq<T: Real>(x: T, y: T) -> (T, T) {
    let r = x.hypot(y);
    (-x / r, y / r)
}

/// Breakdown of the dipole-model potential into its printed terms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DipolePotential<T: Real> {
    pub central: T,
    pub same_axis: T,
    pub cross: T,
    pub dipole: T,
}

impl<T: Real> DipolePotential<T> {
    pub fn total(&self) -> T {
        self.central + self.same_axis + self.cross + self.dipole
    }
}

/// Potential of the dipole model on the `2k1 + 2k2` real coordinates.
pub fn potential_dipole2d<T: Real>(
    couplings: &Couplings<T>,
    s1: &[T],
    s2: &[T],
) -> Result<DipolePotential<T>> {
    let nonzero = |d: T| if d == T::zero() { Err(Error::SingularConfiguration) } else { Ok(d) };
    let half = lit::<T>(0.5);
    let mut central = T::zero();
    for (xs, f) in [(s1, couplings.f1), (s2, couplings.f2)] {
        for &x in xs {
            central = central + f / nonzero(x * x)?;
        }
    }
    let mut same_axis = T::zero();
    for (xs, h) in [(s1, couplings.h11), (s2, couplings.h22)] {
        for p in 0..xs.len() {
            for q in p + 1..xs.len() {
                let d = nonzero(xs[p] - xs[q])?;
                same_axis = same_axis + h / (d * d);
            }
        }
    }
    let sigma = couplings.sigma;
    let (v1x, v1y) = (sigma * couplings.theta1.cos(), sigma * couplings.theta1.sin());
    let (v2x, v2y) = (sigma * couplings.theta2.cos(), sigma * couplings.theta2.sin());
    let v1_dot_v2 = v1x * v2x + v1y * v2y;
    let (mut cross, mut dipole) = (T::zero(), T::zero());
    for &x in s1 {
        for &y in s2 {
            let r2 = nonzero(x * x + y * y)?;
            cross = cross - couplings.h12 / r2;
            let (ex, ey) = e_pq(x, y);
            let tensor = (ex * v1x + ey * v1y) * (ex * v2x + ey * v2y) - half * v1_dot_v2;
            dipole = dipole + tensor / r2;
        }
    }
    Ok(DipolePotential {
        central,
        same_axis,
        cross,
        dipole,
    })
}

/// Dipole model Hamiltonian on mirror-paired axes: kinetic `Σ π²/(2m_j)`
/// with `m_j = √(β_j/4)`, central, same-axis, cross and tensor terms.
pub fn apply_h_dipole2d<T: Real, F: ScalarField<T> + ?Sized>(
    params: &ModelParams<T>,
    couplings: &Couplings<T>,
    f: &F,
    s: &Configuration<T>,
) -> Result<OperatorOutput<T>> {
    params.require_family(&[ModelFamily::Dipole2d])?;
    check_dipole_constraint(couplings.g12, couplings.sigma, couplings.theta1, couplings.theta2)?;
    shape_and_betas(params, s)?;
    let point = s.complex_coords();
    let jets = jets(f, &point)?;
    let fv = value_of(f, &point, &jets);
    let two = lit::<T>(2.0);
    let inv_mass = |m: T| if m != T::zero() { (two * m).recip() } else { T::zero() };
    let (a1, a2) = (inv_mass(couplings.m1), inv_mass(couplings.m2));
    let kinetic = jets
        .iter()
        .enumerate()
        .fold(zero(), |acc, (i, j)| acc - j.dd * if i < s.s1.len() { a1 } else { a2 });
    let v = potential_dipole2d(couplings, &s.s1, &s.s2)?;
    Ok(OperatorOutput::assemble(
        kinetic,
        fv * v.total(),
        fv * (v.cross + v.dipole),
    ))
}

/// Field `σ ↦ f(σ1, i σ2)`: undoes the Wick rotation of the second set when
/// evaluated at `σ2 = −i s2`.
pub struct RotatedField<F> {
    inner: F,
    k1: usize,
}

impl<F> RotatedField<F> {
    pub fn new(inner: F, k1: usize) -> Self {
        Self { inner, k1 }
    }
}

impl<T: Real, F: ScalarField<T>> ScalarField<T> for RotatedField<F> {
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    fn eval(&self, x: &[CSecond<T>]) -> CSecond<T> {
        let i = imag_unit::<T>();
        let y: Vec<_> = x
            .iter()
            .enumerate()
            .map(|(n, v)| if n < self.k1 { *v } else { v.scale(i) })
            .collect();
        self.inner.eval(&y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autodiff::FnField;
    use crate::model::{solve_dipole, Rotation};
    use std::f64::consts::PI;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn close(a: C, b: C, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    fn poly_field(arity: usize) -> impl ScalarField<f64> {
        // a fixed non-symmetric quartic with complex coefficients
        FnField::new(arity, move |x: &[CSecond<f64>]| {
            let mut acc = CSecond::constant(c(0.3, -0.2));
            for (i, xi) in x.iter().enumerate() {
                let a = c(1.0 + i as f64 * 0.5, 0.25 * i as f64);
                acc += xi.scale(a) + xi.powi(2).scale(c(0.1, 0.4 - 0.1 * i as f64));
                if i > 0 {
                    acc += (*xi * x[i - 1]).powi(2).scale(c(-0.05, 0.02));
                }
            }
            acc
        })
    }

    #[test]
    fn calogero_free_waves_at_beta_two() {
        let kappa = [0.7, -1.3, 2.1];
        let f = FnField::new(3, move |x: &[CSecond<f64>]| {
            x.iter()
                .zip(kappa)
                .fold(CSecond::constant_re(0.0), |a, (xi, k)| a + xi.scale(c(0.0, k)))
                .exp()
        });
        let x = Configuration::new(vec![0.1, 0.9, -1.4], vec![]);
        let out = apply_calogero(2.0, &f, &x).unwrap();
        assert_eq!(out.potential_part, c(0.0, 0.0));
        let e: f64 = kappa.iter().map(|k| k * k).sum();
        let fv = f.value_at(&x.complex_coords());
        assert!(close(out.value, fv * e, 1e-14));
    }

    #[test]
    fn calogero_single_particle_sine() {
        let f = FnField::new(1, |x: &[CSecond<f64>]| x[0].sin());
        let out = apply_calogero(1.0, &f, &Configuration::new(vec![PI / 3.0], vec![])).unwrap();
        assert!(close(out.value, c((PI / 3.0).sin(), 0.0), 1e-15));
    }

    #[test]
    fn lb_ordinary_examples() {
        let f = FnField::new(2, |x: &[CSecond<f64>]| x[0].powi(2) + x[1].powi(2));
        let out = apply_lb_ordinary(0.0, &f, &Configuration::new(vec![0.3, 1.1], vec![])).unwrap();
        assert!(close(out.value, c(4.0, 0.0), 1e-15));
        let f = FnField::new(1, |x: &[CSecond<f64>]| x[0].powi(3));
        let out = apply_lb_ordinary(2.5, &f, &Configuration::new(vec![2.0], vec![])).unwrap();
        assert!(close(out.value, c(12.0, 0.0), 1e-15));
    }

    #[test]
    fn lb_super_single_kind() {
        let p = ModelParams::two_kind(ModelFamily::LbSuper, 1, 0, 4.0, 1.0);
        let f = FnField::new(1, |x: &[CSecond<f64>]| x[0].powi(2));
        let out = apply_lb_super(&p, &f, &Configuration::new(vec![0.8], vec![])).unwrap();
        assert!(close(out.value, c(1.0, 0.0), 1e-15));
        let p = ModelParams::two_kind(ModelFamily::LbSuper, 0, 1, 3.0, 1.0);
        let f = FnField::new(1, |x: &[CSecond<f64>]| x[0].exp());
        let out = apply_lb_super(&p, &f, &Configuration::new(vec![], vec![0.0])).unwrap();
        assert!(close(out.value, c(1.0, 0.0), 1e-15));
    }

    #[test]
    fn zero_beta_rejected_only_for_present_kind() {
        let f = poly_field(1);
        let p = ModelParams::two_kind(ModelFamily::SusyUnitary, 1, 0, 0.0, 1.0);
        let s = Configuration::new(vec![0.5], vec![]);
        assert_eq!(apply_h_tilde_unitary(&p, &f, &s), Err(Error::ZeroBeta(1)));
        let p = ModelParams::two_kind(ModelFamily::SusyUnitary, 1, 0, 2.0, 0.0);
        assert!(apply_h_tilde_unitary(&p, &f, &s).is_ok());
    }

    #[test]
    fn unitary_reduces_to_scaled_calogero() {
        let f = poly_field(3);
        let x = Configuration::new(vec![0.4, -1.2, 2.3], vec![]);
        for beta in [0.5, 1.0, 4.0] {
            let p = ModelParams::two_kind(ModelFamily::SusyUnitary, 3, 0, beta, 1.0);
            let a = apply_h_tilde_unitary(&p, &f, &x).unwrap().value;
            let b = apply_calogero(beta, &f, &x).unwrap().value / beta.sqrt();
            assert!(close(a, b, 1e-12));
        }
    }

    #[test]
    fn unitary_cross_vanishes_at_equal_betas() {
        let f = poly_field(3);
        let p = ModelParams::two_kind(ModelFamily::SusyUnitary, 2, 1, 3.0, 3.0);
        let out = apply_h_tilde_unitary(&p, &f, &Configuration::new(vec![0.4, 1.0], vec![-0.3])).unwrap();
        assert_eq!(out.cross_part, c(0.0, 0.0));
    }

    #[test]
    fn two_band_kinetic_mass_convention() {
        let p = ModelParams::two_kind(ModelFamily::TwoBand, 1, 1, 4.0, 9.0);
        let f = FnField::new(2, |x: &[CSecond<f64>]| x[0].powi(2));
        let out = apply_h_two_band(&p, &f, &Configuration::new(vec![0.5], vec![1.5])).unwrap();
        assert!(close(out.kinetic_part, c(-2.0 / 2.0, 0.0), 1e-15));
        let f = FnField::new(2, |x: &[CSecond<f64>]| x[1].powi(2));
        let out = apply_h_two_band(&p, &f, &Configuration::new(vec![0.5], vec![1.5])).unwrap();
        assert!(close(out.kinetic_part, c(2.0 / 3.0, 0.0), 1e-15));
    }

    #[test]
    fn two_band_rejects_coincident_species() {
        let p = ModelParams::two_kind(ModelFamily::TwoBand, 1, 1, 1.0, 4.0);
        let f = poly_field(2);
        let s = Configuration::new(vec![0.5], vec![0.5]);
        assert_eq!(apply_h_two_band(&p, &f, &s), Err(Error::SingularConfiguration));
    }

    #[test]
    fn rotated_unitary_is_two_band() {
        let f = poly_field(4);
        for (b1, b2) in [(1.0, 4.0), (0.5, 2.0), (2.0, 2.0)] {
            let pu = ModelParams::two_kind(ModelFamily::SusyUnitary, 2, 2, b1, b2);
            let pt = pu.with_family(ModelFamily::TwoBand);
            let s = Configuration::new(vec![0.3, -1.1], vec![1.7, 0.6]);
            let rotated = RotatedField::new(&f, 2);
            let s2: Vec<C> = s.s2.iter().map(|&y| c(0.0, -y)).collect();
            let a = apply_h_tilde_unitary_at(&pu, &rotated, &to_complex(&s.s1), &s2).unwrap();
            let b = apply_h_two_band(&pt, &f, &s).unwrap();
            assert!(close(a.value, b.value, 1e-12), "{} vs {}", a.value, b.value);
        }
    }

    #[test]
    fn osp_sign_flip_invariance() {
        let p = ModelParams::two_kind(ModelFamily::SusyOsp, 2, 1, 4.0, 1.0);
        let f = FnField::new(3, |x: &[CSecond<f64>]| {
            let sq: Vec<_> = x.iter().map(|v| v.powi(2)).collect();
            sq[0] * sq[1].scale(c(0.3, 0.1)) + sq[2].powi(2) + sq[0].scale(c(0.0, 2.0))
        });
        let a = apply_h_tilde_osp(&p, &f, &Configuration::new(vec![0.7, 1.3], vec![0.9])).unwrap();
        let b = apply_h_tilde_osp(&p, &f, &Configuration::new(vec![-0.7, 1.3], vec![-0.9])).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn osp_conventions_differ_only_in_g11() {
        let p = ModelParams::two_kind(ModelFamily::SusyOsp, 2, 0, 1.0, 4.0);
        let s1 = [c(0.5, 0.0), c(1.5, 0.0)];
        let (a, _) = potential_osp(&p, &s1, &[], OspConvention::Derived).unwrap();
        let (b, _) = potential_osp(&p, &s1, &[], OspConvention::AsPrinted).unwrap();
        assert!(close(a, -b, 1e-15));
    }

    #[test]
    fn e_pq_is_unit() {
        for (x, y) in [(1.0f64, 2.0f64), (-0.3, 0.1), (5.0, -4.0)] {
            let (ex, ey) = e_pq(x, y);
            assert!((ex.hypot(ey) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn dipole_terms_vanish_pairwise_at_equal_betas() {
        let p = ModelParams::<f64>::two_kind(ModelFamily::Dipole2d, 1, 1, 2.5, 2.5);
        let g12 = g_cross(2.5, 2.5);
        let (t1, t2) = solve_dipole(g12, 1.3).unwrap();
        let cp = derive_couplings(&p, 1.3, t1, t2).unwrap();
        let s = Configuration::mirror(&[0.8], &[1.9]);
        let v = potential_dipole2d(&cp, &s.s1, &s.s2).unwrap();
        assert!(v.dipole.abs() < 1e-15 && v.cross == 0.0);
    }

    #[test]
    fn dipole_rejects_inconsistent_couplings() {
        let p = ModelParams::two_kind(ModelFamily::Dipole2d, 1, 1, 4.0, 1.0);
        let (t1, t2) = solve_dipole(g_cross(4.0, 1.0), 2.0).unwrap();
        let mut cp = derive_couplings(&p, 2.0, t1, t2).unwrap();
        cp.theta1 += 0.1;
        let f = poly_field(4);
        let s = Configuration::mirror(&[0.8], &[1.9]);
        assert!(matches!(
            apply_h_dipole2d(&p, &cp, &f, &s),
            Err(Error::DipoleConstraintViolated { .. })
        ));
    }

    #[test]
    fn wrong_family_rejected() {
        let p = ModelParams::two_kind(ModelFamily::TwoBand, 1, 1, 1.0, 4.0).with_rotation(Rotation::PlusI);
        let f = poly_field(2);
        assert!(matches!(
            apply_h_tilde_osp(&p, &f, &Configuration::new(vec![0.5], vec![1.0])),
            Err(Error::WrongFamily { .. })
        ));
    }
}
