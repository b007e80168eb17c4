//! Vandermonde factor and the radial superspace Jacobians `B` and `C`,
//! with analytic first and second logarithmic derivatives.
//!
//! All logarithms use the principal branch. Only `grad` and `hess_diag`
//! feed the operator checks, and those are branch independent.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::autodiff::{CSecond, ScalarField};
use crate::error::{Error, Result};
use crate::model::{Configuration, ModelFamily, ModelParams};
use crate::num::{lit, real, CompensatedSum, Real};

/// Coordinate count above which derivative sums are compensated.
pub const COMPENSATION_THRESHOLD: usize = 32;

/// `log J` together with its gradient and diagonal Hessian, ordered `s1`
/// then `s2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogJacobian<T: Real> {
    pub log_value: Complex<T>,
    pub grad: Vec<Complex<T>>,
    pub hess_diag: Vec<Complex<T>>,
}

/// Which Jacobian a family's Laplace–Beltrami operator is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JacobianKind {
    /// `|Δ_N(x)|^β`.
    Vandermonde,
    /// `B_{k1k2}(s)`.
    B,
    /// `C_{2k1 2k2}(s)`.
    C,
}

impl JacobianKind {
    pub fn for_family(family: ModelFamily) -> Self {
        match family {
            ModelFamily::OrdinaryCs | ModelFamily::LbOrdinary => Self::Vandermonde,
            ModelFamily::LbSuper | ModelFamily::SusyUnitary | ModelFamily::TwoBand => Self::B,
            ModelFamily::SusyOsp | ModelFamily::Dipole2d => Self::C,
        }
    }
}

/// `Δ_N(x) = Π_{n<m} (x_n − x_m)`; the empty product is 1.
pub fn vandermonde<T: Real>(x: &[T]) -> T {
    let mut prod = T::one();
    for n in 0..x.len() {
        for m in n + 1..x.len() {
            prod = prod * (x[n] - x[m]);
        }
    }
    prod
}

/// Per-coordinate accumulators, compensated for large systems.
struct Accumulators<T: Real> {
    compensated: bool,
    plain: Vec<Complex<T>>,
    comp: Vec<CompensatedSum<T>>,
}

impl<T: Real> Accumulators<T> {
    fn new(len: usize) -> Self {
        let compensated = len > COMPENSATION_THRESHOLD;
        Self {
            compensated,
            plain: vec![Complex::new(T::zero(), T::zero()); if compensated { 0 } else { len }],
            comp: vec![CompensatedSum::new(); if compensated { len } else { 0 }],
        }
    }

    fn add(&mut self, i: usize, x: Complex<T>) {
        if self.compensated {
            self.comp[i].add(x);
        } else {
            self.plain[i] = self.plain[i] + x;
        }
    }

    fn finish(self) -> Vec<Complex<T>> {
        if self.compensated {
            self.comp.iter().map(|c| c.total()).collect()
        } else {
            self.plain
        }
    }
}

struct Builder<T: Real> {
    log: CompensatedSum<T>,
    grad: Accumulators<T>,
    hess: Accumulators<T>,
}

impl<T: Real> Builder<T> {
    fn new(len: usize) -> Self {
        Self {
            log: CompensatedSum::new(),
            grad: Accumulators::new(len),
            hess: Accumulators::new(len),
        }
    }

    fn finish(self) -> LogJacobian<T> {
        LogJacobian {
            log_value: self.log.total(),
            grad: self.grad.finish(),
            hess_diag: self.hess.finish(),
        }
    }
}

fn nonzero<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if z.re == T::zero() && z.im == T::zero() {
        Err(Error::SingularConfiguration)
    } else {
        Ok(z)
    }
}

/// `log |Δ_N(x)|^β` with derivatives.
pub fn log_vandermonde<T: Real>(beta: T, x: &[T]) -> Result<LogJacobian<T>> {
    let n = x.len();
    let mut b = Builder::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let d = x[i] - x[j];
            if d == T::zero() {
                return Err(Error::SingularConfiguration);
            }
            b.log.add(real(beta * d.abs().ln()));
            let g = real(beta / d);
            let h = real(-beta / (d * d));
            b.grad.add(i, g);
            b.grad.add(j, -g);
            b.hess.add(i, h);
            b.hess.add(j, h);
        }
    }
    Ok(b.finish())
}

/// `log B_{k1k2}(s)` at real coordinates.
pub fn log_b<T: Real>(params: &ModelParams<T>, config: &Configuration<T>) -> Result<LogJacobian<T>> {
    params.require_family(&[ModelFamily::LbSuper, ModelFamily::SusyUnitary])?;
    config.check_shape(params)?;
    let to_c = |xs: &[T]| xs.iter().map(|&x| real(x)).collect::<Vec<_>>();
    log_b_at(params, &to_c(&config.s1), &to_c(&config.s2))
}

/// `log B` at complex coordinates (no family check).
pub fn log_b_at<T: Real>(
    params: &ModelParams<T>,
    s1: &[Complex<T>],
    s2: &[Complex<T>],
) -> Result<LogJacobian<T>> {
    let (k1, k2) = (s1.len(), s2.len());
    let (b1, b2) = (params.beta1, params.beta2);
    let gamma = params.gamma();
    let c = params.c.value::<T>();
    let mut b = Builder::new(k1 + k2);
    for (xs, beta, off) in [(s1, b1, 0), (s2, b2, k1)] {
        for p in 0..xs.len() {
            for q in p + 1..xs.len() {
                let d = nonzero(xs[p] - xs[q])?;
                b.log.add(d.ln() * beta);
                let g = d.inv() * beta;
                let h = -(d * d).inv() * beta;
                b.grad.add(off + p, g);
                b.grad.add(off + q, -g);
                b.hess.add(off + p, h);
                b.hess.add(off + q, h);
            }
        }
    }
    for p in 0..k1 {
        for q in 0..k2 {
            let d = nonzero(s1[p] - c * s2[q])?;
            let inv = d.inv();
            let inv2 = inv * inv;
            b.log.add(-d.ln() * gamma);
            b.grad.add(p, -inv * gamma);
            b.hess.add(p, inv2 * gamma);
            b.grad.add(k1 + q, c * inv * gamma);
            b.hess.add(k1 + q, c * c * inv2 * gamma);
        }
    }
    Ok(b.finish())
}

/// `log C_{2k1 2k2}(s)` at real coordinates.
pub fn log_c<T: Real>(params: &ModelParams<T>, config: &Configuration<T>) -> Result<LogJacobian<T>> {
    params.require_family(&[ModelFamily::SusyOsp, ModelFamily::Dipole2d])?;
    config.check_shape(params)?;
    let to_c = |xs: &[T]| xs.iter().map(|&x| real(x)).collect::<Vec<_>>();
    log_c_at(params, &to_c(&config.s1), &to_c(&config.s2))
}

/// `log C` at complex coordinates (no family check).
pub fn log_c_at<T: Real>(
    params: &ModelParams<T>,
    s1: &[Complex<T>],
    s2: &[Complex<T>],
) -> Result<LogJacobian<T>> {
    let (k1, k2) = (s1.len(), s2.len());
    let (b1, b2) = (params.beta1, params.beta2);
    let gamma = params.gamma();
    let two = lit::<T>(2.0);
    let mut b = Builder::new(k1 + k2);
    for (xs, beta, off) in [(s1, b1, 0), (s2, b2, k1)] {
        for p in 0..xs.len() {
            for q in p + 1..xs.len() {
                let (x, y) = (xs[p], xs[q]);
                let d = nonzero(x * x - y * y)?;
                let inv = d.inv();
                b.log.add(d.ln() * beta);
                b.grad.add(off + p, x * inv * two * beta);
                b.grad.add(off + q, -y * inv * two * beta);
                let h = -(x * x + y * y) * inv * inv * two * beta;
                b.hess.add(off + p, h);
                b.hess.add(off + q, h);
            }
        }
    }
    for q in 0..k2 {
        let y = nonzero(s2[q])?;
        b.log.add(y.ln() * b2);
        b.grad.add(k1 + q, y.inv() * b2);
        b.hess.add(k1 + q, -(y * y).inv() * b2);
    }
    for p in 0..k1 {
        for q in 0..k2 {
            let (x, y) = (s1[p], s2[q]);
            let d = nonzero(x * x + y * y)?;
            let inv = d.inv();
            b.log.add(-d.ln() * gamma);
            b.grad.add(p, -x * inv * two * gamma);
            b.grad.add(k1 + q, -y * inv * two * gamma);
            b.hess.add(p, -(y * y - x * x) * inv * inv * two * gamma);
            b.hess.add(k1 + q, -(x * x - y * y) * inv * inv * two * gamma);
        }
    }
    Ok(b.finish())
}

/// The analytic log-Jacobian matching `params.family`.
pub fn log_jacobian<T: Real>(
    params: &ModelParams<T>,
    config: &Configuration<T>,
) -> Result<LogJacobian<T>> {
    config.check_shape(params)?;
    match JacobianKind::for_family(params.family) {
        JacobianKind::Vandermonde => log_vandermonde(params.beta1, &config.s1),
        JacobianKind::B => {
            let to_c = |xs: &[T]| xs.iter().map(|&x| real(x)).collect::<Vec<_>>();
            log_b_at(params, &to_c(&config.s1), &to_c(&config.s2))
        }
        JacobianKind::C => {
            let to_c = |xs: &[T]| xs.iter().map(|&x| real(x)).collect::<Vec<_>>();
            log_c_at(params, &to_c(&config.s1), &to_c(&config.s2))
        }
    }
}

/// `log J` as a [`ScalarField`], evaluated factor by factor in [`CSecond`]
/// arithmetic. Shares no code with the analytic derivative sums above.
#[derive(Clone, Copy, Debug)]
pub struct LogJacobianField<T: Real> {
    params: ModelParams<T>,
    kind: JacobianKind,
    k1: usize,
    k2: usize,
}

impl<T: Real> LogJacobianField<T> {
    pub fn new(params: &ModelParams<T>) -> Self {
        let (k1, k2) = params.layout();
        Self {
            params: *params,
            kind: JacobianKind::for_family(params.family),
            k1,
            k2,
        }
    }

    pub fn with_kind(params: &ModelParams<T>, kind: JacobianKind) -> Self {
        Self {
            kind,
            ..Self::new(params)
        }
    }
}

impl<T: Real> ScalarField<T> for LogJacobianField<T> {
    fn arity(&self) -> usize {
        self.k1 + self.k2
    }

    fn eval(&self, x: &[CSecond<T>]) -> CSecond<T> {
        let (s1, s2) = x.split_at(self.k1);
        let p = &self.params;
        let gamma = real(p.gamma());
        let mut acc = CSecond::constant_re(T::zero());
        match self.kind {
            JacobianKind::Vandermonde => {
                let half_beta = real(p.beta1 * lit(0.5));
                for i in 0..s1.len() {
                    for j in i + 1..s1.len() {
                        let d = s1[i] - s1[j];
                        acc += (d * d).ln().scale(half_beta);
                    }
                }
            }
            JacobianKind::B => {
                let c = p.c.value::<T>();
                for (xs, beta) in [(s1, p.beta1), (s2, p.beta2)] {
                    for i in 0..xs.len() {
                        for j in i + 1..xs.len() {
                            acc += (xs[i] - xs[j]).ln().scale(real(beta));
                        }
                    }
                }
                for a in s1 {
                    for b in s2 {
                        acc -= (*a - b.scale(c)).ln().scale(gamma);
                    }
                }
            }
            JacobianKind::C => {
                for (xs, beta) in [(s1, p.beta1), (s2, p.beta2)] {
                    for i in 0..xs.len() {
                        for j in i + 1..xs.len() {
                            acc += (xs[i] * xs[i] - xs[j] * xs[j]).ln().scale(real(beta));
                        }
                    }
                }
                for b in s2 {
                    acc += b.ln().scale(real(p.beta2));
                }
                for a in s1 {
                    for b in s2 {
                        acc -= (*a * *a + *b * *b).ln().scale(gamma);
                    }
                }
            }
        }
        acc
    }
}
