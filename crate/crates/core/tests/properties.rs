//! Property tests for the model invariants.

use num_complex::Complex64 as C;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use susy_calogero::model::{check_dipole_constraint, derive_couplings, g_cross, g_same, h_cross, solve_dipole};
use susy_calogero::specfun::{bessel_j, hankel};
use susy_calogero::verify::{apply_hamiltonian, run_check, CheckKind, CheckSpec, Polynomial, ResidualReport, Sampler};
use susy_calogero::wavefunctions::{from_schrodinger, to_schrodinger};
use susy_calogero::{CSecond, Configuration, FnField, HankelKind, ModelFamily, ModelParams, ScalarField};

const FAMILIES: [ModelFamily; 7] = [
    ModelFamily::OrdinaryCs,
    ModelFamily::LbOrdinary,
    ModelFamily::LbSuper,
    ModelFamily::SusyUnitary,
    ModelFamily::TwoBand,
    ModelFamily::SusyOsp,
    ModelFamily::Dipole2d,
];

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / (a.norm() + b.norm() + 1e-300)
}

fn params() -> impl Strategy<Value = ModelParams<f64>> {
    (proptest::sample::select(FAMILIES.to_vec()), 1usize..4, 0usize..3, 0usize..3, 0.25f64..6.0, 0.25f64..6.0)
        .prop_filter("two-kind families need a particle", |(f, _, k1, k2, _, _)| f.is_ordinary() || k1 + k2 > 0)
        .prop_map(|(family, n, k1, k2, beta1, beta2)| {
            if family.is_ordinary() {
                ModelParams::ordinary(family, n, beta1)
            } else {
                ModelParams::two_kind(family, k1, k2, beta1, beta2)
            }
        })
}

fn poly(seed: u64, arity: usize) -> Polynomial {
    Polynomial::random(&mut ChaCha8Rng::seed_from_u64(seed), arity, 4, 6)
}

fn point(p: &ModelParams<f64>, seed: u64) -> Configuration<f64> {
    Sampler::new(seed, 1e-2).configuration(p).unwrap()
}

/// `x ↦ f(x ∘ swap(i, j))`.
struct Swapped<F> {
    inner: F,
    i: usize,
    j: usize,
}

impl<F: ScalarField<f64>> ScalarField<f64> for Swapped<F> {
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    fn eval(&self, x: &[CSecond<f64>]) -> CSecond<f64> {
        let mut y = x.to_vec();
        y.swap(self.i, self.j);
        self.inner.eval(&y)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn same_kind_coupling_vanishes_only_at_two(beta in 0.0f64..10.0) {
        prop_assert_eq!(g_same(2.0), 0.0);
        prop_assume!((beta - 2.0).abs() > 1e-6 && beta > 1e-6);
        prop_assert!(g_same(beta) != 0.0);
    }

    #[test]
    fn cross_couplings_vanish_at_equal_betas(beta in 0.0f64..10.0) {
        prop_assert_eq!(g_cross(beta, beta), 0.0);
        prop_assert_eq!(h_cross(beta, beta), 0.0);
        let c = derive_couplings(&ModelParams::two_kind(ModelFamily::SusyUnitary, 1, 1, beta, beta), 0.0, 0.0, 0.0).unwrap();
        prop_assert_eq!(c.f1, -c.f2);
    }

    #[test]
    fn cross_couplings_are_antisymmetric(b1 in 0.0f64..10.0, b2 in 0.0f64..10.0) {
        prop_assert!((g_cross(b1, b2) + g_cross(b2, b1)).abs() <= 1e-15 * (1.0 + g_cross(b1, b2).abs()));
        prop_assert!((h_cross(b1, b2) + h_cross(b2, b1)).abs() <= 1e-15 * (1.0 + h_cross(b1, b2).abs()));
    }

    #[test]
    fn dipole_couplings_split(b1 in 0.1f64..6.0, b2 in 0.1f64..6.0, stretch in 1.0f64..4.0) {
        let p = ModelParams::two_kind(ModelFamily::Dipole2d, 1, 1, b1, b2);
        let g12 = g_cross(b1, b2);
        let sigma = (2.0 * g12.abs()).sqrt().max(1e-3) * stretch;
        let (t1, t2) = solve_dipole(g12, sigma).unwrap();
        check_dipole_constraint(g12, sigma, t1, t2).unwrap();
        let c = derive_couplings(&p, sigma, t1, t2).unwrap();
        let s2 = sigma * sigma;
        prop_assert!((c.h11 - c.g11 - s2 * (2.0 * t1).cos()).abs() <= 1e-14 * (1.0 + s2));
        prop_assert!((c.h22 - c.g22 - s2 * (2.0 * t2).cos()).abs() <= 1e-14 * (1.0 + s2));
        prop_assert!(derive_couplings(&p, sigma, t1 + 0.1, t2).is_err());
    }

    #[test]
    fn operators_are_linear(p in params(), seed in any::<u64>(), a_re in -2.0f64..2.0, a_im in -2.0f64..2.0) {
        let d = p.coordinate_count();
        let (f, g) = (poly(seed, d), poly(seed ^ 0x5555, d));
        let a = C::new(a_re, a_im);
        let sum = FnField::new(d, |x: &[CSecond<f64>]| f.eval(x) + g.eval(x).scale(a));
        let s = point(&p, seed);
        let lhs = apply_hamiltonian(&p, &sum, &s).unwrap().value;
        let rhs = apply_hamiltonian(&p, &f, &s).unwrap().value + a * apply_hamiltonian(&p, &g, &s).unwrap().value;
        prop_assert!(rel(lhs, rhs) < 1e-11, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn operators_commute_with_same_kind_swaps(p in params(), seed in any::<u64>()) {
        let (k1, _) = p.layout();
        prop_assume!(k1 >= 2);
        let f = poly(seed, p.coordinate_count());
        let s = point(&p, seed);
        let mut swapped = s.clone();
        swapped.s1.swap(0, 1);
        swapped.mirror_paired = false;
        let lhs = apply_hamiltonian(&p, &Swapped { inner: &f, i: 0, j: 1 }, &s).unwrap().value;
        let rhs = apply_hamiltonian(&p, &f, &swapped).unwrap().value;
        prop_assert!(rel(lhs, rhs) < 1e-11, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn gauge_round_trip_is_identity(p in params(), seed in any::<u64>()) {
        prop_assume!(p.family != ModelFamily::Dipole2d);
        let f = poly(seed, p.coordinate_count());
        let back = to_schrodinger(&p, from_schrodinger(&p, &f).unwrap()).unwrap();
        let x = point(&p, seed).complex_coords();
        prop_assert!(rel(back.value_at(&x), f.value_at(&x)) < 1e-13);
    }

    #[test]
    fn hankel_kinds_sum_to_twice_bessel(nu in 0.0f64..10.0, r in 0.5f64..30.0, phi in -3.0f64..3.0) {
        let z = C::from_polar(r, phi);
        let (h1, h2) = (hankel(HankelKind::First, nu, z).unwrap(), hankel(HankelKind::Second, nu, z).unwrap());
        let j = bessel_j(nu, z).unwrap();
        prop_assert!((h1 + h2 - j * 2.0).norm() <= 1e-10 * (h1.norm() + h2.norm()));
    }

    #[test]
    fn hankel_kinds_are_conjugate(nu in 0.0f64..10.0, r in 0.5f64..30.0, phi in 0.05f64..3.0) {
        let z = C::from_polar(r, phi);
        let h1 = hankel(HankelKind::First, nu, z).unwrap();
        let h2 = hankel(HankelKind::Second, nu, z.conj()).unwrap();
        prop_assert!(rel(h1, h2.conj()) < 1e-12);
    }
}

fn spec_strategy() -> impl Strategy<Value = CheckSpec> {
    (proptest::sample::select(CheckKind::ALL.to_vec()), 0.5f64..4.0, 0.5f64..4.0, any::<u64>()).prop_map(|(check, b1, b2, seed)| {
        let family = check.default_family();
        let p = if family.is_ordinary() {
            ModelParams::ordinary(family, 2, b1)
        } else {
            ModelParams::two_kind(family, 1, 1, b1, b2)
        };
        CheckSpec::new(check, p).with_seed(seed).with_samples(4)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reports_are_deterministic_and_round_trip(spec in spec_strategy()) {
        let (a, b) = (run_check(&spec), run_check(&spec));
        prop_assert_eq!(&a, &b);
        if let Ok(r) = a {
            let json = serde_json::to_string(&r).unwrap();
            let back: ResidualReport = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(&back, &r);
            prop_assert_eq!(back.spec(), spec);
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
        }
    }
}
