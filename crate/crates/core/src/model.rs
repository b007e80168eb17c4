//! Model families, parameters, configurations and derived couplings.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{imag_unit, lit, Real};

/// Default minimum distance to the singular set, in coordinate units.
/// Keeps inverse-square potentials at or below 1e6.
pub const DEFAULT_SINGULAR_GUARD: f64 = 1e-3;

/// Operator family. The tag fixes the coordinate layout of a
/// [`Configuration`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFamily {
    /// N particles with inverse-square pair interaction.
    OrdinaryCs,
    /// Radial Laplace–Beltrami operator built from `|Δ_N(x)|^β`.
    LbOrdinary,
    /// Radial Laplace–Beltrami operator built from the Jacobian `B`.
    LbSuper,
    /// Two kinds of particles, Wick-rotated (non-Hermitean) form.
    SusyUnitary,
    /// Two-band Hamiltonian with a negative-mass species.
    TwoBand,
    /// Operator built from the Jacobian `C`, in the `k1 + k2` coordinate picture.
    SusyOsp,
    /// Mirror-paired particles on two perpendicular axes carrying dipoles.
    #[serde(rename = "dipole2d")]
    Dipole2d,
}

impl ModelFamily {
    pub fn name(self) -> &'static str {
        match self {
            Self::OrdinaryCs => "ordinary_cs",
            Self::LbOrdinary => "lb_ordinary",
            Self::LbSuper => "lb_super",
            Self::SusyUnitary => "susy_unitary",
            Self::TwoBand => "two_band",
            Self::SusyOsp => "susy_osp",
            Self::Dipole2d => "dipole2d",
        }
    }

    pub fn is_ordinary(self) -> bool {
        matches!(self, Self::OrdinaryCs | Self::LbOrdinary)
    }
}

/// The rotation parameter `c`, restricted to `±i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Rotation {
    #[default]
    #[serde(rename = "+i")]
    PlusI,
    #[serde(rename = "-i")]
    MinusI,
}

impl Rotation {
    pub fn value<T: Real>(self) -> Complex<T> {
        match self {
            Self::PlusI => imag_unit(),
            Self::MinusI => -imag_unit::<T>(),
        }
    }
}

/// Family selector, particle counts and couplings.
///
/// For the ordinary families the single coupling `β` is stored in `beta1`
/// (the JSON key `beta` is accepted as an alias).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<T: Real> {
    pub family: ModelFamily,
    #[serde(default)]
    pub n: usize,
    #[serde(default)]
    pub k1: usize,
    #[serde(default)]
    pub k2: usize,
    #[serde(alias = "beta")]
    pub beta1: T,
    #[serde(default)]
    pub beta2: T,
    #[serde(default)]
    pub c: Rotation,
}

impl<T: Real> ModelParams<T> {
    pub fn ordinary(family: ModelFamily, n: usize, beta: T) -> Self {
        Self {
            family,
            n,
            k1: 0,
            k2: 0,
            beta1: beta,
            beta2: T::zero(),
            c: Rotation::PlusI,
        }
    }

    pub fn two_kind(family: ModelFamily, k1: usize, k2: usize, beta1: T, beta2: T) -> Self {
        Self {
            family,
            n: 0,
            k1,
            k2,
            beta1,
            beta2,
            c: Rotation::PlusI,
        }
    }

    pub fn with_rotation(mut self, c: Rotation) -> Self {
        self.c = c;
        self
    }

    pub fn with_family(mut self, family: ModelFamily) -> Self {
        self.family = family;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, b) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !b.is_finite() || b < T::zero() {
                return Err(Error::InvalidParams(format!("{name} = {b} must be finite and >= 0")));
            }
        }
        if self.family.is_ordinary() {
            if self.n == 0 {
                return Err(Error::InvalidParams("ordinary families need n >= 1".into()));
            }
        } else if self.k1 + self.k2 == 0 {
            return Err(Error::InvalidParams("need k1 + k2 >= 1".into()));
        }
        Ok(())
    }

    /// Lengths of the `s1` and `s2` coordinate sets.
    pub fn layout(&self) -> (usize, usize) {
        match self.family {
            ModelFamily::OrdinaryCs | ModelFamily::LbOrdinary => (self.n, 0),
            ModelFamily::Dipole2d => (2 * self.k1, 2 * self.k2),
            _ => (self.k1, self.k2),
        }
    }

    pub fn coordinate_count(&self) -> usize {
        let (a, b) = self.layout();
        a + b
    }

    pub fn sqrt_beta1(&self) -> T {
        self.beta1.sqrt()
    }

    pub fn sqrt_beta2(&self) -> T {
        self.beta2.sqrt()
    }

    /// `√(β1 β2)`.
    pub fn gamma(&self) -> T {
        (self.beta1 * self.beta2).sqrt()
    }

    /// Rejects `β_j = 0` for a species that is present, since the
    /// superspace operators carry `1/√β_j` kinetic prefactors.
    pub(crate) fn require_positive_betas(&self) -> Result<()> {
        let (a, b) = self.layout();
        if a > 0 && self.beta1 == T::zero() {
            return Err(Error::ZeroBeta(1));
        }
        if b > 0 && self.beta2 == T::zero() {
            return Err(Error::ZeroBeta(2));
        }
        Ok(())
    }

    pub(crate) fn require_family(&self, allowed: &[ModelFamily]) -> Result<()> {
        if allowed.contains(&self.family) {
            Ok(())
        } else {
            Err(Error::WrongFamily {
                expected: allowed.iter().map(|f| f.name()).collect::<Vec<_>>().join("|"),
                got: self.family.name().into(),
            })
        }
    }
}

/// Every derived coupling constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Couplings<T: Real> {
    pub g11: T,
    pub g22: T,
    pub g12: T,
    pub h12: T,
    pub f1: T,
    pub f2: T,
    pub h11: T,
    pub h22: T,
    pub m1: T,
    pub m2: T,
    pub sigma: T,
    pub theta1: T,
    pub theta2: T,
}

/// Same-kind strength `√β (β/2 − 1)`.
pub fn g_same<T: Real>(beta: T) -> T {
    beta.sqrt() * (beta / lit(2.0) - T::one())
}

/// Cross-kind strength `½(√β1 − √β2)(½√(β1β2) + 1)`.
pub fn g_cross<T: Real>(beta1: T, beta2: T) -> T {
    let half = lit::<T>(0.5);
    half * (beta1.sqrt() - beta2.sqrt()) * (half * (beta1 * beta2).sqrt() + T::one())
}

/// `¼√(β1β2)(√β1 − √β2)`.
pub fn h_cross<T: Real>(beta1: T, beta2: T) -> T {
    lit::<T>(0.25) * (beta1 * beta2).sqrt() * (beta1.sqrt() - beta2.sqrt())
}

fn dipole_tolerance<T: Real>(sigma: T) -> T {
    lit::<T>(1e-12).max(T::epsilon() * lit(64.0)) * (sigma * sigma).max(T::one())
}

/// Checks `σ² cos(θ1 + θ2) = 2 g12`.
pub fn check_dipole_constraint<T: Real>(g12: T, sigma: T, theta1: T, theta2: T) -> Result<()> {
    let lhs = sigma * sigma * (theta1 + theta2).cos();
    let rhs = lit::<T>(2.0) * g12;
    if (lhs - rhs).abs() <= dipole_tolerance(sigma) {
        Ok(())
    } else {
        Err(Error::DipoleConstraintViolated {
            lhs: lhs.to_f64().unwrap_or(f64::NAN),
            rhs: rhs.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Derives all coupling constants. For [`ModelFamily::Dipole2d`] the dipole
/// magnitude and angles must satisfy `σ² cos(θ1 + θ2) = 2 g12`; for other
/// families they only enter `h11`, `h22` and are recorded as given.
pub fn derive_couplings<T: Real>(
    params: &ModelParams<T>,
    sigma: T,
    theta1: T,
    theta2: T,
) -> Result<Couplings<T>> {
    params.validate()?;
    let (b1, b2) = (params.beta1, params.beta2);
    let g11 = g_same(b1);
    let g22 = g_same(b2);
    let g12 = g_cross(b1, b2);
    if params.family == ModelFamily::Dipole2d {
        if !(sigma >= T::zero()) {
            return Err(Error::InvalidParams(format!("sigma = {sigma} must be >= 0")));
        }
        check_dipole_constraint(g12, sigma, theta1, theta2)?;
    }
    let eighth = lit::<T>(0.125);
    let half = lit::<T>(0.5);
    let sigma_sq = sigma * sigma;
    let quarter = lit::<T>(0.25);
    let m2_sign = if params.family == ModelFamily::TwoBand {
        -T::one()
    } else {
        T::one()
    };
    Ok(Couplings {
        g11,
        g22,
        g12,
        h12: h_cross(b1, b2),
        f1: eighth * b1 * (half * b1 - T::one()),
        f2: -(eighth * b2 * (half * b2 - T::one())),
        h11: g11 + sigma_sq * (lit::<T>(2.0) * theta1).cos(),
        h22: g22 + sigma_sq * (lit::<T>(2.0) * theta2).cos(),
        m1: (b1 * quarter).sqrt(),
        m2: m2_sign * (b2 * quarter).sqrt(),
        sigma,
        theta1,
        theta2,
    })
}

/// Symmetric dipole angles `θ1 = θ2 = ½ arccos(2 g12 / σ²)`.
pub fn solve_dipole<T: Real>(g12: T, sigma: T) -> Result<(T, T)> {
    if !(sigma > T::zero()) {
        return Err(Error::InvalidParams(format!("sigma = {sigma} must be > 0")));
    }
    let sigma_sq = sigma * sigma;
    let two_g12 = lit::<T>(2.0) * g12;
    if two_g12.abs() > sigma_sq {
        return Err(Error::NoRealAngle {
            two_g12: two_g12.to_f64().unwrap_or(f64::NAN),
            sigma_sq: sigma_sq.to_f64().unwrap_or(f64::NAN),
        });
    }
    let theta = lit::<T>(0.5) * (two_g12 / sigma_sq).acos();
    Ok((theta, theta))
}

/// A point in coordinate space: first set `s1`, second set `s2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Configuration<T: Real> {
    pub s1: Vec<T>,
    pub s2: Vec<T>,
    #[serde(default)]
    pub mirror_paired: bool,
}

impl<T: Real> Configuration<T> {
    pub fn new(s1: Vec<T>, s2: Vec<T>) -> Self {
        Self {
            s1,
            s2,
            mirror_paired: false,
        }
    }

    /// Mirror-paired layout `(−a1, a1, −a2, a2, …)` on each axis.
    pub fn mirror(a: &[T], b: &[T]) -> Self {
        let pair = |xs: &[T]| xs.iter().flat_map(|&x| [-x, x]).collect::<Vec<_>>();
        Self {
            s1: pair(a),
            s2: pair(b),
            mirror_paired: true,
        }
    }

    /// Positive members of each mirror pair.
    pub fn mirror_half(&self) -> (Vec<T>, Vec<T>) {
        let half = |xs: &[T]| xs.chunks(2).map(|p| p[1]).collect::<Vec<_>>();
        (half(&self.s1), half(&self.s2))
    }

    pub fn len(&self) -> usize {
        self.s1.len() + self.s2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinates ordered `s1` then `s2`.
    pub fn coords(&self) -> Vec<T> {
        self.s1.iter().chain(self.s2.iter()).copied().collect()
    }

    pub fn complex_coords(&self) -> Vec<Complex<T>> {
        self.s1
            .iter()
            .chain(self.s2.iter())
            .map(|&x| Complex::new(x, T::zero()))
            .collect()
    }

    pub fn check_shape(&self, params: &ModelParams<T>) -> Result<()> {
        let (a, b) = params.layout();
        if self.s1.len() != a || self.s2.len() != b {
            return Err(Error::ShapeMismatch {
                expected: format!("({a}, {b}) coordinates for {}", params.family.name()),
                got: format!("({}, {})", self.s1.len(), self.s2.len()),
            });
        }
        Ok(())
    }

    /// Full invariant check: shape, finiteness, guard distance and, when
    /// flagged, the `(−s, +s)` pair structure.
    pub fn validate(&self, params: &ModelParams<T>, guard: T) -> Result<()> {
        self.check_shape(params)?;
        if self.coords().iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("non-finite coordinate".into()));
        }
        if self.mirror_paired {
            let paired = |xs: &[T]| {
                xs.len() % 2 == 0 && xs.chunks(2).all(|p| p[0] == -p[1])
            };
            if !(paired(&self.s1) && paired(&self.s2)) {
                return Err(Error::InvalidParams("coordinates are not (-s, +s) pairs".into()));
            }
        }
        if singular_distance(params, self)? < guard {
            return Err(Error::SingularConfiguration);
        }
        Ok(())
    }
}

/// Quantum numbers: `r1`, `r2` for the two-kind families, `kappa` for the
/// ordinary ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct QuantumNumbers<T: Real> {
    #[serde(default)]
    pub r1: Vec<T>,
    #[serde(default)]
    pub r2: Vec<T>,
    #[serde(default)]
    pub kappa: Vec<T>,
}

/// Minimum over all pole-generating expressions of their magnitude, in
/// coordinate units; `+∞` when the model has no pole terms.
pub fn singular_distance<T: Real>(params: &ModelParams<T>, config: &Configuration<T>) -> Result<T> {
    config.check_shape(params)?;
    let to_c = |xs: &[T]| xs.iter().map(|&x| Complex::new(x, T::zero())).collect::<Vec<_>>();
    Ok(singular_distance_at(params, &to_c(&config.s1), &to_c(&config.s2)))
}

/// [`singular_distance`] at complex coordinates (used for Wick-rotated points).
pub fn singular_distance_at<T: Real>(
    params: &ModelParams<T>,
    s1: &[Complex<T>],
    s2: &[Complex<T>],
) -> T {
    let mut d = T::infinity();
    let pairs = |xs: &[Complex<T>], d: &mut T, squares: bool| {
        for p in 0..xs.len() {
            for q in p + 1..xs.len() {
                *d = d.min((xs[p] - xs[q]).norm());
                if squares {
                    *d = d.min((xs[p] + xs[q]).norm());
                }
            }
        }
    };
    match params.family {
        ModelFamily::OrdinaryCs | ModelFamily::LbOrdinary => pairs(s1, &mut d, false),
        ModelFamily::LbSuper | ModelFamily::SusyUnitary | ModelFamily::TwoBand => {
            pairs(s1, &mut d, false);
            pairs(s2, &mut d, false);
            let c = if params.family == ModelFamily::TwoBand {
                Complex::new(T::one(), T::zero())
            } else {
                params.c.value()
            };
            for a in s1 {
                for b in s2 {
                    d = d.min((*a - c * *b).norm());
                }
            }
        }
        ModelFamily::SusyOsp => {
            pairs(s1, &mut d, true);
            pairs(s2, &mut d, true);
            for b in s2 {
                d = d.min(b.norm());
            }
            for a in s1 {
                for b in s2 {
                    d = d.min((*a * *a + *b * *b).norm().sqrt());
                }
            }
        }
        ModelFamily::Dipole2d => {
            pairs(s1, &mut d, false);
            pairs(s2, &mut d, false);
            for x in s1.iter().chain(s2) {
                d = d.min(x.norm());
            }
            for a in s1 {
                for b in s2 {
                    d = d.min((*a * *a + *b * *b).norm().sqrt());
                }
            }
        }
    }
    d
}
