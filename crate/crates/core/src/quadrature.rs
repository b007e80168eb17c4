//! Gauss–Legendre and generalized Gauss–Laguerre rules.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::specfun::ln_gamma;

const NEWTON_STEPS: usize = 100;

/// Nodes and weights of a one-dimensional rule.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// `n`-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let (mid, half) = (0.5 * (b + a), 0.5 * (b - a));
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..NEWTON_STEPS {
            let (p1, p2) = legendre_pair(n, z);
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 {
                let (p1, p2) = legendre_pair(n, z);
                pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
                break;
            }
        }
        let w = 2.0 * half / ((1.0 - z * z) * pp * pp);
        nodes[i] = mid - half * z;
        nodes[n - 1 - i] = mid + half * z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

fn legendre_pair(n: usize, z: f64) -> (f64, f64) {
    let (mut p1, mut p2) = (1.0, 0.0);
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        p1 = ((2 * j - 1) as f64 * z * p2 - (j - 1) as f64 * p3) / j as f64;
    }
    (p1, p2)
}

/// `n`-point generalized Gauss–Laguerre rule for the weight `x^α e^{−x}`
/// on `[0, ∞)`, `α > −1`.
pub fn gauss_laguerre(n: usize, alpha: f64) -> Rule {
    assert!(alpha > -1.0, "Gauss–Laguerre needs alpha > -1");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    let log_norm = ln_gamma(alpha + nf).expect("alpha + n > 0") - ln_gamma(nf).expect("n > 0");
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => (1.0 + alpha) * (3.0 + 0.92 * alpha) / (1.0 + 2.4 * nf + 1.8 * alpha),
            1 => z + (15.0 + 6.25 * alpha) / (1.0 + 0.9 * alpha + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + ((1.0 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * alpha / (1.0 + 3.5 * ai))
                    * (z - nodes[i - 2])
                    / (1.0 + 0.3 * alpha)
            }
        };
        let mut pp = 0.0;
        let mut p2 = 0.0;
        for _ in 0..NEWTON_STEPS {
            let (p1, q2) = laguerre_pair(n, alpha, z);
            p2 = q2;
            pp = (nf * p1 - (nf + alpha) * p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                let (p1, q2) = laguerre_pair(n, alpha, z);
                p2 = q2;
                pp = (nf * p1 - (nf + alpha) * p2) / z;
                break;
            }
        }
        nodes[i] = z;
        weights[i] = -(log_norm.exp()) / (pp * nf * p2);
    }
    // the ln Γ difference carries ~1e-13 relative error; it is common to
    // every weight, so pin the zeroth moment to Γ(α+1)
    let scale = crate::specfun::gamma_real(alpha + 1.0).expect("alpha > -1")
        / weights.iter().rev().sum::<f64>();
    weights.iter_mut().for_each(|w| *w *= scale);
    Rule { nodes, weights }
}

fn laguerre_pair(n: usize, alpha: f64, z: f64) -> (f64, f64) {
    let (mut p1, mut p2) = (1.0, 0.0);
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = ((2.0 * jf - 1.0 + alpha - z) * p2 - (jf - 1.0 + alpha) * p3) / jf;
    }
    (p1, p2)
}

type RuleCache = Mutex<HashMap<(usize, u64), Arc<Rule>>>;

/// Memoized [`gauss_laguerre`]; the cache is bounded and shared across
/// threads.
pub fn gauss_laguerre_cached(n: usize, alpha: f64) -> Arc<Rule> {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (n, alpha.to_bits());
    if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&key) {
        return rule.clone();
    }
    let rule = Arc::new(gauss_laguerre(n, alpha));
    let mut guard = cache.lock().expect("rule cache poisoned");
    if guard.len() >= 256 {
        guard.clear();
    }
    guard.insert(key, rule.clone());
    rule
}

/// Visits every node of the tensor product of `rules` with its weight.
pub fn for_each_tensor_node(rules: &[Rule], mut visit: impl FnMut(&[f64], f64)) {
    if rules.iter().any(Rule::is_empty) {
        return;
    }
    let dim = rules.len();
    let mut idx = vec![0usize; dim];
    let mut point = vec![0.0; dim];
    loop {
        let mut w = 1.0;
        for d in 0..dim {
            point[d] = rules[d].nodes[idx[d]];
            w *= rules[d].weights[idx[d]];
        }
        visit(&point, w);
        let mut d = 0;
        loop {
            if d == dim {
                return;
            }
            idx[d] += 1;
            if idx[d] < rules[d].len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}
