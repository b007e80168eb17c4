//! Independent oracles for integration tests: double-double arithmetic, a
//! 200-term J series, Hankel connection formulas and half-integer closed
//! forms.
#![allow(dead_code)]

use num_complex::Complex64 as C;
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

pub const SERIES_TERMS: usize = 200;

#[derive(Clone, Copy, Debug)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    pub fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let d = quick(s, e + t);
        quick(d.hi, d.lo + f)
    }

    pub fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, b: Self) -> Self {
        self.add(b.neg())
    }

    pub fn mul(self, b: Self) -> Self {
        let p = self.hi * b.hi;
        let e = self.hi.mul_add(b.hi, -p);
        quick(p, e + (self.hi * b.lo + self.lo * b.hi))
    }

    pub fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self.sub(b.mul(Self::from(q1)));
        let q2 = r.hi / b.hi;
        let r = r.sub(b.mul(Self::from(q2)));
        let q3 = r.hi / b.hi;
        quick(q1, q2).add(Self::from(q3))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CDd {
    re: Dd,
    im: Dd,
}

impl CDd {
    pub fn from(z: C) -> Self {
        Self { re: Dd::from(z.re), im: Dd::from(z.im) }
    }

    pub fn to_c(self) -> C {
        C::new(self.re.to_f64(), self.im.to_f64())
    }

    fn add(self, b: Self) -> Self {
        Self { re: self.re.add(b.re), im: self.im.add(b.im) }
    }

    fn mul(self, b: Self) -> Self {
        Self {
            re: self.re.mul(b.re).sub(self.im.mul(b.im)),
            im: self.re.mul(b.im).add(self.im.mul(b.re)),
        }
    }

    fn div_real(self, d: Dd) -> Self {
        Self { re: self.re.div(d), im: self.im.div(d) }
    }
}

/// `J_ν(z)` from 200 terms of the ascending series summed in double-double;
/// the prefactor `(z/2)^ν / Γ(ν+1)` is evaluated in `f64`.
pub fn bessel_j_oracle(nu: f64, z: C) -> C {
    if nu < 0.0 && nu == nu.round() {
        // J_{−n} = (−1)^n J_n
        let sign = if (-nu) as i64 % 2 == 0 { 1.0 } else { -1.0 };
        return bessel_j_oracle(-nu, z) * sign;
    }
    let zd = CDd::from(z);
    let w = zd.mul(zd).div_real(Dd::from(-4.0));
    let mut term = CDd::from(C::new(1.0, 0.0));
    let mut sum = term;
    for k in 1..SERIES_TERMS {
        let kd = Dd::from(k as f64);
        term = term.mul(w).div_real(kd.mul(kd.add(Dd::from(nu))));
        sum = sum.add(term);
    }
    (z / 2.0).powf(nu) / gamma(nu + 1.0) * sum.to_c()
}

/// `H^(1)_ν` (`first`) or `H^(2)_ν` from the J oracle via the connection
/// formulas; `ν` must not be an integer.
pub fn hankel_oracle(first: bool, nu: f64, z: C) -> C {
    let (jp, jm) = (bessel_j_oracle(nu, z), bessel_j_oracle(-nu, z));
    let s = (PI * nu).sin();
    let i = C::new(0.0, 1.0);
    if first {
        (jm - (-i * PI * nu).exp() * jp) / (i * s)
    } else {
        (jm - (i * PI * nu).exp() * jp) / (-i * s)
    }
}

/// Integer-order Hankel function by Richardson extrapolation of the
/// symmetric average `(H_{n+h} + H_{n−h})/2` over `h, h/2, h/4, h/8`.
pub fn hankel_integer_oracle(first: bool, n: i32, z: C, h: f64) -> C {
    let mut table: Vec<C> = (0..4)
        .map(|j| {
            let hj = h / f64::powi(2.0, j);
            (hankel_oracle(first, n as f64 + hj, z) + hankel_oracle(first, n as f64 - hj, z)) / 2.0
        })
        .collect();
    for level in 1..4 {
        let f = 4f64.powi(level);
        for j in (level as usize..4).rev() {
            table[j] = (table[j] * f - table[j - 1]) / (f - 1.0);
        }
    }
    table[3]
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `H^(1,2)_{n+1/2}(z) = √(2z/π) e^{±iz} Σ_k (±i)^{k−n−1} a_k / z^{k+1}`,
/// `a_k = (n+k)! / (2^k k! (n−k)!)`.
pub fn hankel_half_integer(first: bool, n: u32, z: C) -> C {
    let unit = if first { C::new(0.0, 1.0) } else { C::new(0.0, -1.0) };
    let mut sum = C::new(0.0, 0.0);
    for k in 0..=n {
        let a = factorial(n + k) / (2f64.powi(k as i32) * factorial(k) * factorial(n - k));
        sum += unit.powi(k as i32 - n as i32 - 1) * a / z.powi(k as i32 + 1);
    }
    (z * 2.0 / PI).sqrt() * (unit * z).exp() * sum
}

pub fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm()
}

/// Points `r e^{iφ}` with `r ≤ 30` in all four quadrants.
pub fn z_grid() -> Vec<C> {
    let mut out = Vec::new();
    for r in [0.3, 1.0, 2.5, 6.0, 11.0, 18.0, 25.0, 30.0] {
        for deg in [-170.0, -135.0, -90.0, -40.0, 0.0, 25.0, 70.0, 120.0, 180.0] {
            out.push(C::from_polar(r, f64::to_radians(deg)));
        }
    }
    out
}
