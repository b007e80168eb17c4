//! Scalar abstraction shared by all numerical modules.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point scalar the numerical core is generic over.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in T")
}

#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count representable in T")
}

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub fn real<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub fn imag_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

pub fn is_finite_c<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Neumaier-compensated accumulator for complex sums.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum<T: Real> {
    sum: Complex<T>,
    comp: Complex<T>,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: Complex::new(T::zero(), T::zero()),
            comp: Complex::new(T::zero(), T::zero()),
        }
    }

    pub fn add(&mut self, x: Complex<T>) {
        let (s, c) = neumaier(self.sum.re, self.comp.re, x.re);
        let (si, ci) = neumaier(self.sum.im, self.comp.im, x.im);
        self.sum = Complex::new(s, si);
        self.comp = Complex::new(c, ci);
    }

    pub fn total(&self) -> Complex<T> {
        self.sum + self.comp
    }
}

fn neumaier<T: Real>(sum: T, comp: T, x: T) -> (T, T) {
    let t = sum + x;
    let comp = if sum.abs() >= x.abs() {
        comp + ((sum - t) + x)
    } else {
        comp + ((x - t) + sum)
    };
    (t, comp)
}

/// Sums complex terms, switching to compensated accumulation above
/// `threshold` terms.
pub fn sum_terms<T: Real, I>(terms: I, threshold: usize) -> Complex<T>
where
    I: IntoIterator<Item = Complex<T>>,
    I::IntoIter: ExactSizeIterator,
{
    let iter = terms.into_iter();
    if iter.len() > threshold {
        let mut acc = CompensatedSum::new();
        iter.for_each(|t| acc.add(t));
        acc.total()
    } else {
        iter.fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = CompensatedSum::<f64>::new();
        acc.add(real(1.0e16));
        for _ in 0..1000 {
            acc.add(real(1.0));
        }
        acc.add(real(-1.0e16));
        assert_eq!(acc.total().re, 1000.0);
    }
}
