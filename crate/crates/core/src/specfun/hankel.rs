//! Hankel functions of real order and complex argument.
//!
//! Routing for `H¹_ν(z)`, `ν ≥ 0` (negative orders by reflection, `H²`
//! by conjugation):
//!
//! - half-integer `ν`: terminating closed form;
//! - `|z| ≥ 30`: asymptotic expansion, continued through `z = w e^{−iπ}`
//!   when `arg z < −π/2`;
//! - `2 ≤ |z| < 30` in the sector around the upper half-plane: Laplace
//!   integral `∫ e^{−t} t^{ν−½} (1 + it/2z)^{ν−½} dt` by generalized
//!   Gauss–Laguerre quadrature;
//! - otherwise the connection formula from the `J` series, or the
//!   integer-order `Y_n` series when `|sin πν| ≤ 1e−8`.

use num_complex::Complex;

use super::bessel::bessel_j_series;
use super::gamma::{digamma_int, recip_gamma};
use super::{normalize, HankelKind, NEAR_INTEGER};
use crate::autodiff::CSecond;
use crate::error::{Error, Result};
use crate::num::{cplx, imag_unit, lit, CompensatedSum, Real};
use crate::quadrature::gauss_laguerre_cached;

/// Radius beyond which the asymptotic expansion is used.
pub const HANKEL_ASYMPTOTIC_RADIUS: f64 = 30.0;
/// Node count of the Laguerre rule.
pub const LAGUERRE_NODES: usize = 64;
const LAGUERRE_MIN_RADIUS: f64 = 2.0;
const WIDE_SECTOR_RADIUS: f64 = 12.0;
const MAX_ASYMPTOTIC_TERMS: usize = 40;

/// `H¹_ν(z)` or `H²_ν(z)` on the principal branch.
pub fn hankel<T: Real>(kind: HankelKind, nu: T, z: Complex<T>) -> Result<Complex<T>> {
    let z = normalize(z);
    if z.re == T::zero() && z.im == T::zero() {
        return Err(Error::ZeroArgument);
    }
    if !(nu.is_finite() && z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Overflow);
    }
    if nu < T::zero() {
        let mu = -nu;
        let s = match kind {
            HankelKind::First => T::one(),
            HankelKind::Second => -T::one(),
        };
        return Ok(hankel(kind, mu, z)? * Complex::from_polar(T::one(), s * T::PI() * mu));
    }
    let value = match kind {
        HankelKind::First => h1(nu, z)?,
        HankelKind::Second => h2(nu, z)?,
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow)
    }
}

fn h2<T: Real>(nu: T, z: Complex<T>) -> Result<Complex<T>> {
    if z.im == T::zero() && z.re < T::zero() {
        // H²_ν(x e^{iπ}) = 2cos(νπ) H²_ν(x) + e^{iνπ} H¹_ν(x)
        let x = Complex::new(-z.re, T::zero());
        let a = h2(nu, x)?;
        let b = h1(nu, x)?;
        let two_cos = lit::<T>(2.0) * (T::PI() * nu).cos();
        return Ok(a * two_cos + b * Complex::from_polar(T::one(), T::PI() * nu));
    }
    Ok(h1(nu, normalize(z.conj()))?.conj())
}

fn h1<T: Real>(nu: T, z: Complex<T>) -> Result<Complex<T>> {
    let two_nu = nu + nu;
    if two_nu == two_nu.round() && (two_nu / lit(2.0)).fract() != T::zero() {
        return Ok(h1_half_integer(nu, z));
    }
    let r = z.norm();
    let arg = z.arg();
    let pi = T::PI();
    if r >= lit(HANKEL_ASYMPTOTIC_RADIUS) {
        if arg >= -pi / lit(2.0) {
            return Ok(h1_asymptotic(nu, z));
        }
        let w = -z;
        return Ok(continue_below(nu, h1_asymptotic(nu, w), h1_asymptotic(nu, w.conj()).conj()));
    }
    if r >= lit(LAGUERRE_MIN_RADIUS) {
        if arg >= -pi / lit(4.0) || (r >= lit(WIDE_SECTOR_RADIUS) && arg >= -pi / lit(3.0)) {
            return Ok(h1_laguerre(nu, z));
        }
        if arg <= -pi * lit(0.75) {
            let w = -z;
            return Ok(continue_below(nu, h1_laguerre(nu, w), h1_laguerre(nu, w.conj()).conj()));
        }
    }
    h1_connection(nu, z)
}

/// `H¹_ν(w e^{−iπ}) = 2cos(νπ) H¹_ν(w) + e^{−iνπ} H²_ν(w)`.
fn continue_below<T: Real>(nu: T, h1_w: Complex<T>, h2_w: Complex<T>) -> Complex<T> {
    let two_cos = lit::<T>(2.0) * (T::PI() * nu).cos();
    h1_w * two_cos + h2_w * Complex::from_polar(T::one(), -T::PI() * nu)
}

/// `√(2/(πz))` on the principal branch.
fn prefactor<T: Real>(z: Complex<T>) -> Complex<T> {
    cplx((lit::<T>(2.0) / T::PI()).sqrt(), T::zero()) / z.sqrt()
}

/// `e^{i(z − νπ/2 − π/4)}`.
fn phase<T: Real>(nu: T, z: Complex<T>) -> Complex<T> {
    let shift = T::PI() * (nu / lit(2.0) + lit(0.25));
    (imag_unit::<T>() * z).exp() * Complex::from_polar(T::one(), -shift)
}

fn h1_half_integer<T: Real>(nu: T, z: Complex<T>) -> Complex<T> {
    let n = (nu - lit(0.5)).round().to_usize().expect("half-integer order >= 1/2");
    let x = imag_unit::<T>() / (z * lit::<T>(2.0));
    let mut coeff = T::one();
    let mut power = Complex::new(T::one(), T::zero());
    let mut sum = Complex::new(T::zero(), T::zero());
    for k in 0..=n {
        if k > 0 {
            let kf = lit::<T>(k as f64);
            let nf = lit::<T>(n as f64);
            coeff = coeff * (nf + kf) * (nf - kf + T::one()) / kf;
            power = power * x;
        }
        sum = sum + power * coeff;
    }
    let minus_i_pow = match (n + 1) % 4 {
        0 => cplx(T::one(), T::zero()),
        1 => cplx(T::zero(), -T::one()),
        2 => cplx(-T::one(), T::zero()),
        _ => cplx(T::zero(), T::one()),
    };
    prefactor(z) * minus_i_pow * (imag_unit::<T>() * z).exp() * sum
}

fn h1_asymptotic<T: Real>(nu: T, z: Complex<T>) -> Complex<T> {
    let mu = lit::<T>(4.0) * nu * nu;
    let x = imag_unit::<T>() / z;
    let mut term = Complex::new(T::one(), T::zero());
    let mut sum = term;
    let mut last = T::infinity();
    for k in 1..=MAX_ASYMPTOTIC_TERMS {
        let odd = lit::<T>((2 * k - 1) as f64);
        term = term * x * ((mu - odd * odd) / lit::<T>(8.0 * k as f64));
        let size = term.norm();
        if size > last || size == T::zero() {
            break;
        }
        sum = sum + term;
        last = size;
        if size <= T::epsilon() * lit(0.25) * sum.norm() {
            break;
        }
    }
    prefactor(z) * phase(nu, z) * sum
}

fn h1_laguerre<T: Real>(nu: T, z: Complex<T>) -> Complex<T> {
    let alpha = nu - lit(0.5);
    let rule = gauss_laguerre_cached(LAGUERRE_NODES, alpha.to_f64().expect("finite order"));
    let x = imag_unit::<T>() / (z * lit::<T>(2.0));
    let mut acc = CompensatedSum::new();
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let base = Complex::new(T::one(), T::zero()) + x * lit::<T>(t);
        acc.add((base.ln() * alpha).exp() * lit::<T>(w));
    }
    prefactor(z) * phase(nu, z) * acc.total() * recip_gamma(nu + lit(0.5))
}

fn h1_connection<T: Real>(nu: T, z: Complex<T>) -> Result<Complex<T>> {
    let s = (T::PI() * nu).sin();
    if s.abs() > lit(NEAR_INTEGER) {
        let jp = bessel_j_series(nu, z)?;
        let jm = bessel_j_series(-nu, z)?;
        let e = Complex::from_polar(T::one(), -T::PI() * nu);
        return Ok((jm - e * jp) / (imag_unit::<T>() * s));
    }
    let n = nu.round().to_usize().expect("non-negative integer order");
    let j = bessel_j_series(lit::<T>(n as f64), z)?;
    Ok(j + imag_unit::<T>() * bessel_y_int(n, z, j))
}

/// `Y_n(z)` from its ascending series, given `J_n(z)`.
fn bessel_y_int<T: Real>(n: usize, z: Complex<T>, j: Complex<T>) -> Complex<T> {
    let half = z * lit::<T>(0.5);
    let q = half * half;
    let pi = T::PI();
    let mut head = Complex::new(T::zero(), T::zero());
    if n > 0 {
        // Σ_{k<n} (n−k−1)!/k! q^k
        let mut coeff = (1..n).fold(T::one(), |f, i| f * lit(i as f64));
        let mut power = Complex::new(T::one(), T::zero());
        for k in 0..n {
            if k > 0 {
                coeff = coeff / (lit::<T>((n - k) as f64) * lit::<T>(k as f64));
                power = power * q;
            }
            head = head + power * coeff;
        }
        head = -head * half.powi(-(n as i32)) / pi;
    }
    let mut acc = CompensatedSum::new();
    let mut term = cplx(recip_gamma(lit::<T>((n + 1) as f64)), T::zero());
    let neg_q = -q;
    let k_min = z.norm() * lit(0.5) + T::one();
    for k in 0..600usize {
        let weight = digamma_int::<T>(k + 1) + digamma_int::<T>(n + k + 1);
        let contribution = term * weight;
        acc.add(contribution);
        let kf = lit::<T>((k + 1) as f64);
        term = term * neg_q / (kf * (kf + lit(n as f64)));
        if kf > k_min && contribution.norm() <= T::epsilon() * lit(0.25) * acc.total().norm() {
            break;
        }
    }
    let tail = -acc.total() * half.powi(n as i32) / pi;
    head + half.ln() * j * (lit::<T>(2.0) / pi) + tail
}

/// `H_ν` with its first and second derivative carried through the argument
/// jet: `H' = H_{ν−1} − (ν/z) H`, `H'' = −H'/z − (1 − ν²/z²) H`.
pub fn hankel_jet<T: Real>(kind: HankelKind, nu: T, z: CSecond<T>) -> Result<CSecond<T>> {
    let h = hankel(kind, nu, z.v)?;
    let hm = hankel(kind, nu - T::one(), z.v)?;
    let zi = z.v.inv();
    let d1 = hm - h * zi * nu;
    let d2 = -d1 * zi - h * (Complex::new(T::one(), T::zero()) - zi * zi * (nu * nu));
    Ok(z.lift(h, d1, d2))
}
