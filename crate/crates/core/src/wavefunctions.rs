//! Closed-form two-particle eigenfunction, superspace energies and the
//! gauge transforms between the Laplace–Beltrami and Schrödinger pictures.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::autodiff::{CSecond, ScalarField};
use crate::error::{Error, Result};
use crate::jacobians::LogJacobianField;
use crate::model::{ModelParams, QuantumNumbers};
use crate::num::{cplx, imag_unit, lit, Real};
use crate::specfun::{cpow, hankel, hankel_jet, HankelKind};

/// The sign in the exponential prefactor of `ψ11`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value<T: Real>(self) -> T {
        match self {
            Self::Plus => T::one(),
            Self::Minus => -T::one(),
        }
    }
}

/// Parameters of the `k1 = k2 = 1`, `c = +i` eigenfunction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Psi11Params<T: Real> {
    pub beta1: T,
    pub beta2: T,
    pub r11: T,
    pub r12: T,
    pub sign: Sign,
    pub kind: HankelKind,
}

impl<T: Real> Psi11Params<T> {
    pub fn new(beta1: T, beta2: T, r11: T, r12: T, sign: Sign, kind: HankelKind) -> Result<Self> {
        let p = Self {
            beta1,
            beta2,
            r11,
            r12,
            sign,
            kind,
        };
        p.validate()?;
        Ok(p)
    }

    /// Default pairing of the exponential sign with the Hankel kind:
    /// `Plus` with the second kind, `Minus` with the first. Both pairings
    /// (and the two crossed ones) solve the eigenvalue equation.
    pub fn paired(beta1: T, beta2: T, r11: T, r12: T, sign: Sign) -> Result<Self> {
        let kind = match sign {
            Sign::Plus => HankelKind::Second,
            Sign::Minus => HankelKind::First,
        };
        Self::new(beta1, beta2, r11, r12, sign, kind)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, b) in [(1u8, self.beta1), (2, self.beta2)] {
            if !b.is_finite() || b < T::zero() {
                return Err(Error::InvalidParams(format!("beta{i} = {b} must be finite and >= 0")));
            }
            if b == T::zero() {
                return Err(Error::ZeroBeta(i));
            }
        }
        if self.beta1 == self.beta2 {
            return Err(Error::EqualBetas);
        }
        if self.r11 == T::zero() && self.r12 == T::zero() {
            return Err(Error::ZeroArgument);
        }
        Ok(())
    }

    /// `√(β1 β2)`.
    pub fn gamma(&self) -> T {
        (self.beta1 * self.beta2).sqrt()
    }

    /// Order `ν = √(β1β2)/2 + 1/2`.
    pub fn nu(&self) -> T {
        self.gamma() / lit(2.0) + lit(0.5)
    }

    fn r(&self) -> Complex<T> {
        cplx(self.r11, -self.r12)
    }

    /// `z = κ (s11 − i s12)` with `κ = (√β2 r11 − i√β1 r12)/(√β2 − √β1)`.
    fn kappa(&self) -> Complex<T> {
        let (a, b) = (self.beta1.sqrt(), self.beta2.sqrt());
        cplx(b * self.r11, -a * self.r12) / (b - a)
    }

    pub fn z(&self, s11: T, s12: T) -> Complex<T> {
        self.kappa() * cplx(s11, -s12)
    }

    /// `r11²/√β1 + r12²/√β2`.
    pub fn energy(&self) -> T {
        self.r11 * self.r11 / self.beta1.sqrt() + self.r12 * self.r12 / self.beta2.sqrt()
    }

    pub fn quantum_numbers(&self) -> QuantumNumbers<T> {
        QuantumNumbers {
            r1: vec![self.r11],
            r2: vec![self.r12],
            kappa: Vec::new(),
        }
    }
}

/// `Σ_p r_p1²/√β1 + Σ_p r_p2²/√β2`.
pub fn energy_super<T: Real>(params: &ModelParams<T>, r: &QuantumNumbers<T>) -> Result<T> {
    let (k1, k2) = (params.k1, params.k2);
    if r.r1.len() != k1 || r.r2.len() != k2 {
        return Err(Error::ShapeMismatch {
            expected: format!("({k1}, {k2}) quantum numbers"),
            got: format!("({}, {})", r.r1.len(), r.r2.len()),
        });
    }
    let part = |rs: &[T], beta: T| -> Result<T> {
        if rs.is_empty() {
            return Ok(T::zero());
        }
        if !(beta > T::zero()) {
            return Err(Error::InvalidParams(format!("beta = {beta} must be > 0")));
        }
        Ok(rs.iter().fold(T::zero(), |a, &x| a + x * x) / beta.sqrt())
    };
    Ok(part(&r.r1, params.beta1)? + part(&r.r2, params.beta2)?)
}

/// `ψ11(s11, s12)` evaluated with principal branches throughout.
pub fn psi11<T: Real>(p: &Psi11Params<T>, s11: T, s12: T) -> Result<Complex<T>> {
    p.validate()?;
    let s = cplx(s11, -s12);
    let z = p.z(s11, s12);
    if s == cplx(T::zero(), T::zero()) || z == cplx(T::zero(), T::zero()) {
        return Err(Error::ZeroArgument);
    }
    let (a, b) = (p.beta1.sqrt(), p.beta2.sqrt());
    let i = imag_unit::<T>();
    let exponent = i * cplx(a * s11, -b * s12) * p.r() * (p.sign.value::<T>() / (a - b));
    let h = hankel(p.kind, p.nu(), z)?;
    let denominator = cpow(s * p.r(), p.gamma() / lit(2.0))?;
    Ok(exponent.exp() * cpow(z, p.nu())? * h / denominator)
}

/// `ψ11` as a two-coordinate [`ScalarField`] (`s11`, `s12`).
#[derive(Clone, Copy, Debug)]
pub struct Psi11Field<T: Real> {
    pub params: Psi11Params<T>,
}

impl<T: Real> Psi11Field<T> {
    pub fn new(params: Psi11Params<T>) -> Result<Self> {
        params.validate()?;
        Ok(Self { params })
    }
}

impl<T: Real> ScalarField<T> for Psi11Field<T> {
    fn arity(&self) -> usize {
        2
    }

    fn eval(&self, x: &[CSecond<T>]) -> CSecond<T> {
        let p = &self.params;
        let i = imag_unit::<T>();
        let (a, b) = (p.beta1.sqrt(), p.beta2.sqrt());
        let s = x[0] - x[1].scale(i);
        let z = s.scale(p.kappa());
        let phase = (x[0].scale(cplx(a, T::zero())) - x[1].scale(cplx(T::zero(), b)))
            .scale(i * p.r() * (p.sign.value::<T>() / (a - b)))
            .exp();
        let h = match hankel_jet(p.kind, p.nu(), z) {
            Ok(h) => h,
            Err(_) => {
                let nan = cplx(T::nan(), T::nan());
                return CSecond::new(nan, nan, nan);
            }
        };
        let denominator = s.scale(p.r()).powf(p.gamma() / lit(2.0));
        phase * z.powf(p.nu()) * h / denominator
    }
}

/// `s ↦ g(s) · exp(λ log J(s))` with `J` the family's Jacobian.
pub struct GaugeField<T: Real, F> {
    inner: F,
    log_j: LogJacobianField<T>,
    exponent: T,
}

impl<T: Real, F: ScalarField<T>> ScalarField<T> for GaugeField<T, F> {
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    fn eval(&self, x: &[CSecond<T>]) -> CSecond<T> {
        let factor = self.log_j.eval(x).scale(cplx(self.exponent, T::zero())).exp();
        self.inner.eval(x) * factor
    }
}

fn gauge<T: Real, F: ScalarField<T>>(params: &ModelParams<T>, f: F, exponent: T) -> Result<GaugeField<T, F>> {
    params.validate()?;
    let log_j = LogJacobianField::new(params);
    if f.arity() != log_j.arity() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} coordinates", log_j.arity()),
            got: format!("{}", f.arity()),
        });
    }
    Ok(GaugeField {
        inner: f,
        log_j,
        exponent,
    })
}

/// Laplace–Beltrami picture from the Schrödinger picture:
/// `s ↦ ψ(s) · J(s)^{−1/2}`. The constant `J(r)^{1/2}` factor is dropped.
pub fn from_schrodinger<T: Real, F: ScalarField<T>>(
    params: &ModelParams<T>,
    psi: F,
) -> Result<GaugeField<T, F>> {
    gauge(params, psi, lit(-0.5))
}

/// Inverse of [`from_schrodinger`]: `s ↦ φ(s) · J(s)^{1/2}`.
pub fn to_schrodinger<T: Real, F: ScalarField<T>>(
    params: &ModelParams<T>,
    phi: F,
) -> Result<GaugeField<T, F>> {
    gauge(params, phi, lit(0.5))
}
