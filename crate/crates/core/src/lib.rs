//! Numerical construction and cross-verification of Calogero–Sutherland
//! operators on ordinary and symmetric superspaces.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: model families, parameters, coordinate layouts and every
//!   derived coupling constant.
//! - [`jacobians`]: Vandermonde factor and the two superspace Jacobians with
//!   analytic logarithmic derivatives.
//! - [`autodiff`]: a complex second-order forward-mode carrier
//!   ([`CSecond`]) and the [`ScalarField`] abstraction operators act on.
//! - [`specfun`]: Gamma, Bessel J and Hankel functions of real order and
//!   complex argument.
//! - [`quadrature`]: Gauss–Legendre and generalized Gauss–Laguerre rules.
//! - [`operators`]: pointwise application of all second-order operators.
//! - [`wavefunctions`]: the closed-form two-particle eigenfunction, energies
//!   and the gauge transforms between the Laplace–Beltrami and Schrödinger
//!   pictures.
//! - [`verify`]: the seeded residual harness that turns each identity into a
//!   reproducible [`verify::ResidualReport`].
//!
//! Numerical code is generic over the real scalar `T: Real` (`f32` or `f64`).
//! The `*64` aliases below are the double-precision instantiations used by
//! the verification harness and the command-line tool.

pub mod autodiff;
pub mod error;
pub mod jacobians;
pub mod model;
pub mod num;
pub mod operators;

pub mod quadrature;
pub mod wavefunctions;
pub mod specfun;
pub mod verify;



pub use autodiff::{CSecond, FnField, ScalarField};
pub use error::{Error, Result};
pub use jacobians::LogJacobian;
pub use model::{
    Configuration, Couplings, ModelFamily, ModelParams, QuantumNumbers, Rotation,
    DEFAULT_SINGULAR_GUARD,
};
pub use num::Real;
pub use operators::OperatorOutput;

pub use specfun::HankelKind;
pub use wavefunctions::{Psi11Params, Sign};


pub type C64 = num_complex::Complex<f64>;
pub type CSecond64 = CSecond<f64>;
pub type ModelParams64 = ModelParams<f64>;
pub type Couplings64 = Couplings<f64>;
pub type Configuration64 = Configuration<f64>;
pub type QuantumNumbers64 = QuantumNumbers<f64>;
pub type LogJacobian64 = LogJacobian<f64>;
pub type OperatorOutput64 = OperatorOutput<f64>;
pub type Psi11Params64 = Psi11Params<f64>;


