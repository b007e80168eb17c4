//! Complex second-order forward-mode differentiation along one seeded
//! coordinate, plus a central-difference oracle.
//!
//! Every operator in this crate is a sum of diagonal second derivatives, so
//! a carrier with `(value, d/ds, d²/ds²)` along a single seeded coordinate is
//! enough; applying an operator costs one field evaluation per coordinate.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::Configuration;
use crate::num::{is_finite_c, lit, real, Real};

/// Value with first and second derivative along one seeded direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CSecond<T: Real> {
    pub v: Complex<T>,
    pub d: Complex<T>,
    pub dd: Complex<T>,
}

impl<T: Real> CSecond<T> {
    pub fn new(v: Complex<T>, d: Complex<T>, dd: Complex<T>) -> Self {
        Self { v, d, dd }
    }

    pub fn constant(v: Complex<T>) -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self { v, d: z, dd: z }
    }

    pub fn constant_re(v: T) -> Self {
        Self::constant(real(v))
    }

    /// The seeded coordinate itself: `d = 1`, `dd = 0`.
    pub fn variable(v: Complex<T>) -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self { v, d: real(T::one()), dd: z }
    }

    /// Applies a scalar function given its value and first two derivatives
    /// at `self.v`.
    pub fn lift(self, f: Complex<T>, f1: Complex<T>, f2: Complex<T>) -> Self {
        Self {
            v: f,
            d: f1 * self.d,
            dd: f2 * self.d * self.d + f1 * self.dd,
        }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.lift(e, e, e)
    }

    /// Principal logarithm.
    pub fn ln(self) -> Self {
        let r = self.v.inv();
        self.lift(self.v.ln(), r, -r * r)
    }

    /// Principal power `exp(a Log v)`.
    pub fn powf(self, a: T) -> Self {
        let p = self.v.powf(a);
        let r = self.v.inv();
        let f1 = p * r * a;
        let f2 = f1 * r * (a - T::one());
        self.lift(p, f1, f2)
    }

    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => Self::constant(real(T::one())),
            1 => self,
            _ if n < 0 => self.powi(-n).recip(),
            _ => {
                let mut acc = self;
                for _ in 1..n {
                    acc *= self;
                }
                acc
            }
        }
    }

    pub fn sqrt(self) -> Self {
        self.powf(lit(0.5))
    }

    pub fn recip(self) -> Self {
        let r = self.v.inv();
        let r2 = r * r;
        self.lift(r, -r2, r2 * r * lit::<T>(2.0))
    }

    pub fn sin(self) -> Self {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.lift(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.lift(c, -s, -c)
    }

    pub fn scale(self, a: Complex<T>) -> Self {
        Self {
            v: self.v * a,
            d: self.d * a,
            dd: self.dd * a,
        }
    }

    pub fn is_finite(&self) -> bool {
        is_finite_c(self.v) && is_finite_c(self.d) && is_finite_c(self.dd)
    }
}

impl<T: Real> Add for CSecond<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.v + o.v, self.d + o.d, self.dd + o.dd)
    }
}

impl<T: Real> Sub for CSecond<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.v - o.v, self.d - o.d, self.dd - o.dd)
    }
}

impl<T: Real> Mul for CSecond<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let two = lit::<T>(2.0);
        Self::new(
            self.v * o.v,
            self.d * o.v + self.v * o.d,
            self.dd * o.v + self.d * o.d * two + self.v * o.dd,
        )
    }
}

impl<T: Real> Div for CSecond<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let r = o.v.inv();
        let q = self.v * r;
        let qd = (self.d - q * o.d) * r;
        let qdd = (self.dd - qd * o.d * lit::<T>(2.0) - q * o.dd) * r;
        Self::new(q, qd, qdd)
    }
}

impl<T: Real> Neg for CSecond<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.v, -self.d, -self.dd)
    }
}

impl<T: Real> Add<Complex<T>> for CSecond<T> {
    type Output = Self;
    fn add(self, c: Complex<T>) -> Self {
        Self::new(self.v + c, self.d, self.dd)
    }
}

impl<T: Real> Sub<Complex<T>> for CSecond<T> {
    type Output = Self;
    fn sub(self, c: Complex<T>) -> Self {
        Self::new(self.v - c, self.d, self.dd)
    }
}

impl<T: Real> Mul<Complex<T>> for CSecond<T> {
    type Output = Self;
    fn mul(self, c: Complex<T>) -> Self {
        self.scale(c)
    }
}

impl<T: Real> Div<Complex<T>> for CSecond<T> {
    type Output = Self;
    fn div(self, c: Complex<T>) -> Self {
        self.scale(c.inv())
    }
}

impl<T: Real> Mul<T> for CSecond<T> {
    type Output = Self;
    fn mul(self, c: T) -> Self {
        Self::new(self.v * c, self.d * c, self.dd * c)
    }
}

impl<T: Real> AddAssign for CSecond<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> SubAssign for CSecond<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Real> MulAssign for CSecond<T> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

/// Field arithmetic shared by plain complex numbers and [`CSecond`], so that
/// series code can be run either for values or for exact derivatives.
pub trait ComplexScalar<T: Real>:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Mul<Complex<T>, Output = Self>
{
    fn from_complex(c: Complex<T>) -> Self;
    fn value(&self) -> Complex<T>;
    fn c_exp(self) -> Self;
    fn c_ln(self) -> Self;
    fn c_powf(self, a: T) -> Self;
}

impl<T: Real> ComplexScalar<T> for Complex<T> {
    fn from_complex(c: Complex<T>) -> Self {
        c
    }
    fn value(&self) -> Complex<T> {
        *self
    }
    fn c_exp(self) -> Self {
        self.exp()
    }
    fn c_ln(self) -> Self {
        self.ln()
    }
    fn c_powf(self, a: T) -> Self {
        self.powf(a)
    }
}

impl<T: Real> ComplexScalar<T> for CSecond<T> {
    fn from_complex(c: Complex<T>) -> Self {
        Self::constant(c)
    }
    fn value(&self) -> Complex<T> {
        self.v
    }
    fn c_exp(self) -> Self {
        self.exp()
    }
    fn c_ln(self) -> Self {
        self.ln()
    }
    fn c_powf(self, a: T) -> Self {
        self.powf(a)
    }
}

/// A function of `arity` complex coordinates evaluated in [`CSecond`]
/// arithmetic. Implementations must be pure.
pub trait ScalarField<T: Real>: Send + Sync {
    fn arity(&self) -> usize;
    fn eval(&self, x: &[CSecond<T>]) -> CSecond<T>;

    /// Plain evaluation at a complex point.
    fn value_at(&self, x: &[Complex<T>]) -> Complex<T> {
        let xs: Vec<_> = x.iter().map(|&c| CSecond::constant(c)).collect();
        self.eval(&xs).v
    }
}

impl<T: Real, F: ScalarField<T> + ?Sized> ScalarField<T> for &F {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn eval(&self, x: &[CSecond<T>]) -> CSecond<T> {
        (**self).eval(x)
    }
}

impl<T: Real, F: ScalarField<T> + ?Sized> ScalarField<T> for Box<F> {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn eval(&self, x: &[CSecond<T>]) -> CSecond<T> {
        (**self).eval(x)
    }
}

impl<T: Real, F: ScalarField<T> + ?Sized> ScalarField<T> for Arc<F> {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn eval(&self, x: &[CSecond<T>]) -> CSecond<T> {
        (**self).eval(x)
    }
}

/// Closure-backed field.
pub struct FnField<F> {
    arity: usize,
    f: F,
}

impl<F> FnField<F> {
    pub fn new(arity: usize, f: F) -> Self {
        Self { arity, f }
    }
}

impl<T: Real, F> ScalarField<T> for FnField<F>
where
    F: Fn(&[CSecond<T>]) -> CSecond<T> + Send + Sync,
{
    fn arity(&self) -> usize {
        self.arity
    }
    fn eval(&self, x: &[CSecond<T>]) -> CSecond<T> {
        (self.f)(x)
    }
}

/// `(f, ∂f/∂x_index, ∂²f/∂x_index²)` at a complex point.
pub fn jet_at<T: Real, F: ScalarField<T> + ?Sized>(
    f: &F,
    point: &[Complex<T>],
    index: usize,
) -> Result<CSecond<T>> {
    if index >= point.len() {
        return Err(Error::IndexOutOfRange {
            index,
            arity: point.len(),
        });
    }
    check_arity(f, point.len())?;
    let xs: Vec<_> = point
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if i == index {
                CSecond::variable(c)
            } else {
                CSecond::constant(c)
            }
        })
        .collect();
    Ok(f.eval(&xs))
}

/// Jets along every coordinate, in coordinate order.
pub fn all_jets<T: Real, F: ScalarField<T> + ?Sized>(
    f: &F,
    point: &[Complex<T>],
) -> Result<Vec<CSecond<T>>> {
    check_arity(f, point.len())?;
    let mut xs: Vec<_> = point.iter().map(|&c| CSecond::constant(c)).collect();
    let mut out = Vec::with_capacity(point.len());
    for i in 0..point.len() {
        xs[i] = CSecond::variable(point[i]);
        out.push(f.eval(&xs));
        xs[i] = CSecond::constant(point[i]);
    }
    Ok(out)
}

fn check_arity<T: Real, F: ScalarField<T> + ?Sized>(f: &F, n: usize) -> Result<()> {
    if f.arity() != n {
        return Err(Error::ShapeMismatch {
            expected: format!("{} coordinates", f.arity()),
            got: format!("{n}"),
        });
    }
    Ok(())
}

/// Exact value, first and second partial derivative of `f` along one
/// coordinate of `config` (coordinates ordered `s1` then `s2`).
pub fn second_partial<T: Real, F: ScalarField<T> + ?Sized>(
    f: &F,
    config: &Configuration<T>,
    index: usize,
) -> Result<(Complex<T>, Complex<T>, Complex<T>)> {
    let point = config.complex_coords();
    let j = jet_at(f, &point, index)?;
    Ok((j.v, j.d, j.dd))
}

/// Default central-difference step `1e-4 * max(1, |x|)`.
pub fn default_fd_step<T: Real>(x: T) -> T {
    lit::<T>(1e-4) * x.abs().max(T::one())
}

/// Central differences `(f(+h) - f(-h)) / 2h` and
/// `(f(+h) - 2 f(0) + f(-h)) / h²` along one coordinate.
pub fn fd_second_partial<T: Real, F: ScalarField<T> + ?Sized>(
    f: &F,
    config: &Configuration<T>,
    index: usize,
    h: T,
) -> Result<(Complex<T>, Complex<T>)> {
    if !(h > T::zero()) {
        return Err(Error::InvalidParams(format!("step h = {h} must be positive")));
    }
    let point = config.complex_coords();
    if index >= point.len() {
        return Err(Error::IndexOutOfRange {
            index,
            arity: point.len(),
        });
    }
    check_arity(f, point.len())?;
    let eval_shifted = |shift: T| {
        let mut p = point.clone();
        p[index] = p[index] + real(shift);
        f.value_at(&p)
    };
    let fp = eval_shifted(h);
    let f0 = eval_shifted(T::zero());
    let fm = eval_shifted(-h);
    if !(is_finite_c(fp) && is_finite_c(f0) && is_finite_c(fm)) {
        return Err(Error::SingularConfiguration);
    }
    let two = lit::<T>(2.0);
    let d1 = (fp - fm) / (two * h);
    let d2 = (fp - f0 * two + fm) / (h * h);
    Ok((d1, d2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::cplx;

    fn one_d(x: f64) -> Configuration<f64> {
        Configuration::new(vec![x], vec![])
    }

    #[test]
    fn polynomial_jet() {
        let f = FnField::new(1, |x: &[CSecond<f64>]| x[0] * x[0]);
        let (v, d, dd) = second_partial(&f, &one_d(3.0), 0).unwrap();
        assert_eq!((v, d, dd), (real(9.0), real(6.0), real(2.0)));
    }

    #[test]
    fn exp_of_imaginary() {
        let f = FnField::new(1, |x: &[CSecond<f64>]| (x[0] * cplx(0.0, 1.0)).exp());
        let (v, d, dd) = second_partial(&f, &one_d(0.0), 0).unwrap();
        assert!((v - real(1.0)).norm() < 1e-15);
        assert!((d - cplx(0.0, 1.0)).norm() < 1e-15);
        assert!((dd - real(-1.0)).norm() < 1e-15);
    }

    #[test]
    fn quotient_and_log_rules() {
        // f = log(x) / (1 + x²) at x = 2, derivatives by hand.
        let f = FnField::new(1, |x: &[CSecond<f64>]| {
            x[0].ln() / (x[0] * x[0] + real(1.0))
        });
        let (v, d, dd) = second_partial(&f, &one_d(2.0), 0).unwrap();
        let x: f64 = 2.0;
        let g = 1.0 + x * x;
        let l = x.ln();
        let ev = l / g;
        let ed = 1.0 / (x * g) - 2.0 * x * l / (g * g);
        let edd = -1.0 / (x * x * g) - 4.0 / g.powi(2) - 2.0 * l / g.powi(2)
            + 8.0 * x * x * l / g.powi(3);
        assert!((v.re - ev).abs() < 1e-15);
        assert!((d.re - ed).abs() < 1e-15);
        assert!((dd.re - edd).abs() < 1e-14);
    }

    #[test]
    fn trig_and_powers() {
        let f = FnField::new(1, |x: &[CSecond<f64>]| x[0].sin() * x[0].powf(1.5) + x[0].powi(-2));
        let x: f64 = 1.3;
        let (_, d, dd) = second_partial(&f, &one_d(x), 0).unwrap();
        let ed = x.cos() * x.powf(1.5) + 1.5 * x.sin() * x.sqrt() - 2.0 * x.powi(-3);
        let edd = -x.sin() * x.powf(1.5) + 3.0 * x.cos() * x.sqrt() + 0.75 * x.sin() / x.sqrt()
            + 6.0 * x.powi(-4);
        assert!((d.re - ed).abs() < 1e-14);
        assert!((dd.re - edd).abs() < 1e-13);
    }

    #[test]
    fn fd_cubic_and_sine() {
        let cube = FnField::new(1, |x: &[CSecond<f64>]| x[0] * x[0] * x[0]);
        let (d1, d2) = fd_second_partial(&cube, &one_d(1.0), 0, 1e-4).unwrap();
        assert!((d1.re - 3.0).abs() < 1e-7);
        assert!((d2.re - 6.0).abs() < 1e-3);
        let sine = FnField::new(1, |x: &[CSecond<f64>]| x[0].sin());
        let (d1, d2) = fd_second_partial(&sine, &one_d(0.0), 0, 1e-4).unwrap();
        assert!((d1.re - 1.0).abs() < 1e-8);
        assert!(d2.norm() < 1e-8);
    }

    #[test]
    fn index_and_step_errors() {
        let f = FnField::new(1, |x: &[CSecond<f64>]| x[0]);
        assert!(matches!(
            second_partial(&f, &one_d(1.0), 1),
            Err(Error::IndexOutOfRange { index: 1, arity: 1 })
        ));
        assert!(fd_second_partial(&f, &one_d(1.0), 0, 0.0).is_err());
        let pole = FnField::new(1, |x: &[CSecond<f64>]| x[0].recip());
        assert_eq!(
            fd_second_partial(&pole, &one_d(0.0), 0, 1e-3),
            Err(Error::SingularConfiguration)
        );
    }

    #[test]
    fn single_precision_instantiation() {
        let f = FnField::new(1, |x: &[CSecond<f32>]| x[0] * x[0] * x[0]);
        let c = Configuration::new(vec![2.0f32], vec![]);
        let (_, d, dd) = second_partial(&f, &c, 0).unwrap();
        assert_eq!((d.re, dd.re), (12.0, 12.0));
    }
}
