//! Seeded test functions for the residual checks.

use num_complex::Complex;
use rand::Rng;

use crate::autodiff::{CSecond, ScalarField};

type C64 = Complex<f64>;

/// Sparse polynomial `Σ c_t Π x_i^{e_ti}` with complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    arity: usize,
    terms: Vec<(C64, Vec<u32>)>,
}

/// Number of monomials drawn by [`Polynomial::random`].
pub const DEFAULT_TERMS: usize = 10;

impl Polynomial {
    pub fn new(arity: usize, terms: Vec<(C64, Vec<u32>)>) -> Self {
        assert!(terms.iter().all(|(_, e)| e.len() == arity), "exponent length != arity");
        Self { arity, terms }
    }

    /// Random polynomial of total degree `degree` with unit-scale complex
    /// coefficients: one full-degree monomial, one `x_i²` per coordinate
    /// (so no second derivative vanishes identically) and `terms − 1`
    /// further monomials of random degree.
    pub fn random<R: Rng>(rng: &mut R, arity: usize, degree: u32, terms: usize) -> Self {
        Self::random_with_step(rng, arity, degree, terms, 1)
    }

    /// As [`Polynomial::random`] but with even exponents only, so the
    /// result is invariant under every sign flip.
    pub fn random_even<R: Rng>(rng: &mut R, arity: usize, degree: u32, terms: usize) -> Self {
        Self::random_with_step(rng, arity, degree, terms, 2)
    }

    fn random_with_step<R: Rng>(rng: &mut R, arity: usize, degree: u32, terms: usize, step: u32) -> Self {
        let units = degree / step;
        let coefficient = |rng: &mut R| C64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
        let mut out = Vec::with_capacity(terms + arity);
        for t in 0..terms.max(1) {
            let mut e = vec![0u32; arity];
            if arity > 0 {
                let d = if t == 0 { units } else { rng.random_range(0..=units) };
                for _ in 0..d {
                    e[rng.random_range(0..arity)] += step;
                }
            }
            out.push((coefficient(rng), e));
            if t == 0 && degree >= 2 {
                for i in 0..arity {
                    let mut sq = vec![0u32; arity];
                    sq[i] = 2;
                    out.push((coefficient(rng), sq));
                }
            }
        }
        Self { arity, terms: out }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(_, e)| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> &[(C64, Vec<u32>)] {
        &self.terms
    }
}

impl ScalarField<f64> for Polynomial {
    fn arity(&self) -> usize {
        self.arity
    }

    fn eval(&self, x: &[CSecond<f64>]) -> CSecond<f64> {
        let mut acc = CSecond::constant_re(0.0);
        for (c, e) in &self.terms {
            let mut m = CSecond::constant(*c);
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    m *= xi.powi(k as i32);
                }
            }
            acc += m;
        }
        acc
    }
}

/// `Σ_t c_t Π_i cos(ω_ti x_i)`: even in every coordinate and disjoint from
/// the polynomial family.
#[derive(Clone, Debug, PartialEq)]
pub struct CosineProduct {
    arity: usize,
    terms: Vec<(C64, Vec<f64>)>,
}

impl CosineProduct {
    pub fn random<R: Rng>(rng: &mut R, arity: usize, terms: usize) -> Self {
        let terms = (0..terms.max(1))
            .map(|_| {
                let c = C64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
                let w = (0..arity).map(|_| rng.random_range(0.1..=1.0)).collect();
                (c, w)
            })
            .collect();
        Self { arity, terms }
    }
}

impl ScalarField<f64> for CosineProduct {
    fn arity(&self) -> usize {
        self.arity
    }

    fn eval(&self, x: &[CSecond<f64>]) -> CSecond<f64> {
        let mut acc = CSecond::constant_re(0.0);
        for (c, w) in &self.terms {
            let mut m = CSecond::constant(*c);
            for (xi, &wi) in x.iter().zip(w) {
                m *= (*xi * wi).cos();
            }
            acc += m;
        }
        acc
    }
}

/// `Π_i (1 − t_i²)^m · P(x)` with `t_i` the coordinate rescaled to
/// `[−1, 1]` on the box; zero outside the box.
#[derive(Clone, Debug, PartialEq)]
pub struct Bump {
    lo: Vec<f64>,
    hi: Vec<f64>,
    power: i32,
    poly: Polynomial,
}

impl Bump {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, power: i32, poly: Polynomial) -> Self {
        assert_eq!(lo.len(), hi.len());
        assert_eq!(lo.len(), poly.arity);
        Self { lo, hi, power, poly }
    }
}

impl ScalarField<f64> for Bump {
    fn arity(&self) -> usize {
        self.lo.len()
    }

    fn eval(&self, x: &[CSecond<f64>]) -> CSecond<f64> {
        let mut envelope = CSecond::constant_re(1.0);
        for ((xi, &a), &b) in x.iter().zip(&self.lo).zip(&self.hi) {
            if !(xi.v.re > a && xi.v.re < b) {
                return CSecond::constant_re(0.0);
            }
            let t = (*xi * 2.0 - C64::new(a + b, 0.0)) * (1.0 / (b - a));
            envelope *= (CSecond::constant_re(1.0) - t * t).powi(self.power);
        }
        envelope * self.poly.eval(x)
    }
}

/// `(a, b) ↦ f(−a1, a1, …, −b1, b1, …)`: the function a mirror-paired
/// field induces on the positive pair members.
pub struct MirrorInduced<F> {
    inner: F,
    k1: usize,
    k2: usize,
}

impl<F> MirrorInduced<F> {
    pub fn new(inner: F, k1: usize, k2: usize) -> Self {
        Self { inner, k1, k2 }
    }
}

impl<F: ScalarField<f64>> ScalarField<f64> for MirrorInduced<F> {
    fn arity(&self) -> usize {
        self.k1 + self.k2
    }

    fn eval(&self, x: &[CSecond<f64>]) -> CSecond<f64> {
        let full: Vec<_> = x.iter().flat_map(|&v| [-v, v]).collect();
        self.inner.eval(&full)
    }
}

/// `f` restricted to the coordinates `offset..offset + arity`, the rest
/// held at `frozen`.
pub struct Restricted<F> {
    inner: F,
    frozen: Vec<C64>,
    offset: usize,
    arity: usize,
}

impl<F> Restricted<F> {
    pub fn new(inner: F, frozen: Vec<C64>, offset: usize, arity: usize) -> Self {
        assert!(offset + arity <= frozen.len());
        Self {
            inner,
            frozen,
            offset,
            arity,
        }
    }
}

impl<F: ScalarField<f64>> ScalarField<f64> for Restricted<F> {
    fn arity(&self) -> usize {
        self.arity
    }

    fn eval(&self, x: &[CSecond<f64>]) -> CSecond<f64> {
        let mut full: Vec<_> = self.frozen.iter().map(|&c| CSecond::constant(c)).collect();
        full[self.offset..self.offset + self.arity].copy_from_slice(x);
        self.inner.eval(&full)
    }
}
