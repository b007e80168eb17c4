//! Gamma function of real argument (Lanczos, g = 7, n = 9).

use crate::error::{Error, Result};
use crate::num::{lit, Real};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole<T: Real>(x: T) -> bool {
    x <= T::zero() && x == x.round()
}

/// Lanczos sum and shifted argument for `x >= 0.5`.
fn lanczos<T: Real>(x: T) -> (T, T) {
    let x = x - T::one();
    let mut a = lit::<T>(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a = a + lit::<T>(c) / (x + lit(i as f64));
    }
    (a, x + lit(LANCZOS_G + 0.5))
}

/// `Γ(x)`; reflection for `x < 1/2`.
pub fn gamma_real<T: Real>(x: T) -> Result<T> {
    if is_pole(x) {
        return Err(Error::PoleAtNonPositiveInteger(x.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked<T: Real>(x: T) -> T {
    if x < lit(0.5) {
        return T::PI() / ((T::PI() * x).sin() * gamma_unchecked(T::one() - x));
    }
    if x == x.round() && x <= lit(24.0) {
        let mut f = T::one();
        let mut k = lit::<T>(2.0);
        while k < x {
            f = f * k;
            k = k + T::one();
        }
        return f;
    }
    let (a, t) = lanczos(x);
    // split the power so t^(x-1/2) does not overflow before e^{-t} is applied
    let half_pow = t.powf((x - lit(0.5)) / lit(2.0));
    (T::PI() + T::PI()).sqrt() * half_pow * (half_pow * (-t).exp()) * a
}

/// `1/Γ(x)`, zero at the poles.
pub fn recip_gamma<T: Real>(x: T) -> T {
    if is_pole(x) {
        T::zero()
    } else {
        gamma_unchecked(x).recip()
    }
}

/// `ln |Γ(x)|`.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    if is_pole(x) {
        return Err(Error::PoleAtNonPositiveInteger(x.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(ln_gamma_unchecked(x))
}

fn ln_gamma_unchecked<T: Real>(x: T) -> T {
    if x < lit(0.5) {
        return (T::PI() / (T::PI() * x).sin().abs()).ln() - ln_gamma_unchecked(T::one() - x);
    }
    let (a, t) = lanczos(x);
    lit::<T>(0.5) * (T::PI() + T::PI()).ln() + (x - lit(0.5)) * t.ln() - t + a.ln()
}

/// `ψ(n) = −γ + Σ_{k<n} 1/k` for integers `n >= 1`.
pub fn digamma_int<T: Real>(n: usize) -> T {
    let euler = lit::<T>(0.577_215_664_901_532_9);
    let mut h = T::zero();
    for k in 1..n {
        h = h + lit::<T>(k as f64).recip();
    }
    h - euler
}
