//! Bessel function of the first kind, real order, complex argument.

use num_complex::Complex;

use super::gamma::recip_gamma;
use super::hankel::hankel;
use super::{normalize, HankelKind};
use crate::autodiff::ComplexScalar;
use crate::error::{Error, Result};
use crate::num::{cplx, lit, CompensatedSum, Real};

const MAX_TERMS: usize = 600;
/// Digits the power series may lose, as `|z| − |Im z|`, before the Hankel
/// route takes over.
const SERIES_LOSS_LIMIT: f64 = 4.0;
const MAX_ARGUMENT: f64 = 1e4;

/// `J_ν(z)` with the principal branch of `z^ν`.
///
/// Uses the power series where its cancellation is mild and
/// `(H¹_ν + H²_ν)/2` (after reflecting into the right half-plane)
/// elsewhere.
pub fn bessel_j<T: Real>(nu: T, z: Complex<T>) -> Result<Complex<T>> {
    let z = normalize(z);
    if !(nu.is_finite() && z.re.is_finite() && z.im.is_finite()) || z.norm() > lit(MAX_ARGUMENT) {
        return Err(Error::Overflow);
    }
    if nu < T::zero() && nu == nu.round() {
        let n = -nu;
        let sign = if (n / lit(2.0)).fract() == T::zero() { T::one() } else { -T::one() };
        return Ok(bessel_j(n, z)? * sign);
    }
    if z.norm() - z.im.abs() <= lit(SERIES_LOSS_LIMIT) {
        return bessel_j_series(nu, z);
    }
    let (w, phase) = if z.re > T::zero() {
        (z, Complex::new(T::one(), T::zero()))
    } else {
        let s = if z.im >= T::zero() { T::one() } else { -T::one() };
        (-z, Complex::from_polar(T::one(), s * T::PI() * nu))
    };
    let h1 = hankel(HankelKind::First, nu, w)?;
    let h2 = hankel(HankelKind::Second, nu, w)?;
    finite((h1 + h2) * lit::<T>(0.5) * phase)
}

fn finite<T: Real>(v: Complex<T>) -> Result<Complex<T>> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow)
    }
}

/// Power series `Σ (−1)^k (z/2)^{ν+2k} / (k! Γ(ν+k+1))` with compensated
/// summation, for any real order.
pub fn bessel_j_series<T: Real>(nu: T, z: Complex<T>) -> Result<Complex<T>> {
    let z = normalize(z);
    if nu < T::zero() && nu == nu.round() {
        let n = -nu;
        let sign = if (n / lit(2.0)).fract() == T::zero() { T::one() } else { -T::one() };
        return Ok(bessel_j_series(n, z)? * sign);
    }
    let zero = Complex::new(T::zero(), T::zero());
    if z == zero {
        return if nu == T::zero() {
            Ok(Complex::new(T::one(), T::zero()))
        } else if nu > T::zero() {
            Ok(zero)
        } else {
            Err(Error::Overflow)
        };
    }
    let half = z * lit::<T>(0.5);
    let w = -(half * half);
    let mut term = cplx(recip_gamma(nu + T::one()), T::zero());
    let mut acc = CompensatedSum::new();
    let k_min = z.norm() * lit(0.5) + T::one();
    for k in 1..=MAX_TERMS {
        acc.add(term);
        let kf = lit::<T>(k as f64);
        term = term * w / (kf * (nu + kf));
        let total = acc.total();
        if kf > k_min && term.norm() <= T::epsilon() * lit(0.25) * total.norm() {
            break;
        }
    }
    finite(acc.total() * (half.ln() * nu).exp())
}

/// The same power series evaluated in any [`ComplexScalar`] arithmetic,
/// e.g. [`crate::CSecond`] for exact derivatives. Plain summation; meant for
/// moderate `|z|`.
pub fn bessel_j_series_in<T: Real, S: ComplexScalar<T>>(nu: T, z: S) -> S {
    let half = z * cplx(lit::<T>(0.5), T::zero());
    let w = -(half * half);
    let mut term = S::from_complex(cplx(recip_gamma(nu + T::one()), T::zero()));
    let mut sum = term;
    let k_min = z.value().norm() * lit(0.5) + T::one();
    for k in 1..=MAX_TERMS {
        let kf = lit::<T>(k as f64);
        term = term * w * cplx((kf * (nu + kf)).recip(), T::zero());
        sum = sum + term;
        if kf > k_min && term.value().norm() <= T::epsilon() * lit(0.25) * sum.value().norm() {
            break;
        }
    }
    sum * half.c_powf(nu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autodiff::CSecond;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn rel(a: Complex<f64>, b: Complex<f64>) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn half_order_closed_form() {
        let got = bessel_j(0.5, c(1.0, 0.0)).unwrap();
        assert!((got.re - 0.671_396_707_1).abs() < 1e-10);
        for z in [c(1.0, 0.0), c(7.5, 2.0), c(-20.0, 3.0), c(0.3, -12.0), c(25.0, 0.0)] {
            let exact = (c(2.0 / std::f64::consts::PI, 0.0) / z).sqrt() * z.sin();
            assert!(rel(bessel_j(0.5, z).unwrap(), exact) < 1e-12, "{z}");
        }
    }

    #[test]
    fn zero_argument() {
        assert_eq!(bessel_j(0.7, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(bessel_j(0.0, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(bessel_j(-0.3, c(0.0, 0.0)), Err(Error::Overflow));
    }

    #[test]
    fn negative_integer_order() {
        let z = c(2.5, 0.4);
        let a = bessel_j(-3.0, z).unwrap();
        let b = bessel_j(3.0, z).unwrap();
        assert!(rel(a, -b) < 1e-15);
    }

    #[test]
    fn recurrence() {
        for (nu, z) in [(0.5, c(3.0, 1.0)), (2.3, c(-6.0, 4.0)), (4.9, c(9.0, -1.5)), (1.1, c(0.2, 8.0))] {
            let lhs = bessel_j(nu - 1.0, z).unwrap() + bessel_j(nu + 1.0, z).unwrap();
            let rhs = bessel_j(nu, z).unwrap() * (2.0 * nu) / z;
            assert!(rel(lhs, rhs) < 1e-9, "nu {nu}, z {z}");
        }
    }

    #[test]
    fn series_and_hankel_routes_agree_in_overlap() {
        for z in [c(5.0, 0.5), c(-4.5, -0.7), c(8.0, 3.0)] {
            for nu in [0.25, 1.0, 3.7] {
                let s = bessel_j_series(nu, z).unwrap();
                let h = bessel_j(nu, z).unwrap();
                assert!(rel(s, h) < 1e-12, "nu {nu}, z {z}: {s} vs {h}");
            }
        }
    }

    #[test]
    fn generic_series_matches_and_differentiates() {
        let nu = 1.3;
        let z0 = c(1.2, 0.7);
        let j = bessel_j_series_in(nu, CSecond::variable(z0));
        assert!(rel(j.v, bessel_j(nu, z0).unwrap()) < 1e-14);
        let residual = j.dd * z0 * z0 + j.d * z0 + j.v * (z0 * z0 - nu * nu);
        assert!(residual.norm() < 1e-13);
    }

    #[test]
    fn large_arguments_error() {
        assert_eq!(bessel_j(1.0, c(2e4, 0.0)), Err(Error::Overflow));
    }
}
