//! Gamma, Bessel J and Hankel functions of real order and complex argument,
//! plus principal-branch complex powers.

mod bessel;
mod gamma;
mod hankel;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Real;

pub use bessel::{bessel_j, bessel_j_series, bessel_j_series_in};
pub use gamma::{digamma_int, gamma_real, ln_gamma, recip_gamma};
pub use hankel::{hankel, hankel_jet, HANKEL_ASYMPTOTIC_RADIUS, LAGUERRE_NODES};

/// Kind of Hankel function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HankelKind {
    First,
    Second,
}

impl HankelKind {
    pub fn other(self) -> Self {
        match self {
            Self::First => Self::Second,
            Self::Second => Self::First,
        }
    }
}

/// Order threshold below which `|sin πν|` counts as an integer order.
pub const NEAR_INTEGER: f64 = 1e-8;

/// Maps a `−0` imaginary part to `+0` so the principal argument of a
/// negative real number is `+π`.
#[inline]
pub(crate) fn normalize<T: Real>(z: Complex<T>) -> Complex<T> {
    Complex::new(z.re, z.im + T::zero())
}

/// `z^a = exp(a Log z)` with the principal logarithm, `arg ∈ (−π, π]`.
pub fn cpow<T: Real>(z: Complex<T>, a: T) -> Result<Complex<T>> {
    let z = normalize(z);
    if z.re == T::zero() && z.im == T::zero() {
        return if a > T::zero() {
            Ok(Complex::new(T::zero(), T::zero()))
        } else if a == T::zero() {
            Ok(Complex::new(T::one(), T::zero()))
        } else {
            Err(Error::ZeroBase)
        };
    }
    Ok((z.ln() * a).exp())
}
