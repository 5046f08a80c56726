//! Scalar fields used for coefficients: `f64`, `Complex64` and exact rationals.

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Zero};
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// Exact rational scalar used by `--exact` mode.
pub type Rational = Ratio<i128>;

pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
{
    fn from_i64(n: i64) -> Self;

    fn from_frac(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Magnitude as `f64`, used for tolerances and truncation monitors.
    fn modulus(&self) -> f64;

    fn conj(&self) -> Self;

    /// Lossy conversion to a complex double.
    fn to_c64(&self) -> Complex64;
}

impl Scalar for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn modulus(&self) -> f64 {
        self.abs()
    }
    fn conj(&self) -> Self {
        *self
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

impl Scalar for Complex64 {
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

impl Scalar for Rational {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n as i128)
    }
    fn modulus(&self) -> f64 {
        (*self.numer() as f64 / *self.denom() as f64).abs()
    }
    fn conj(&self) -> Self {
        *self
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self.numer() as f64 / *self.denom() as f64, 0.0)
    }
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

pub fn factorial_i(n: usize) -> i64 {
    (1..=n as i64).product()
}

pub fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

/// `(2k-1)!!`, with `(-1)!! = 1`.
pub fn double_factorial_odd(k: usize) -> i64 {
    (1..=k as i64).map(|j| 2 * j - 1).product()
}

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
