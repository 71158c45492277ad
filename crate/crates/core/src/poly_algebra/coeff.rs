//! Coefficient fields for series arithmetic.
//!
//! Everything in the algebra and the normal-form construction is generic over
//! [`Coefficient`]. Two implementations are provided: `Complex64` for the
//! numerical pipeline and [`ExactComplex`] (complex numbers over arbitrary
//! precision rationals) for exact regression runs.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use num_complex::{Complex, Complex64};

/// Complex rationals.
pub type ExactComplex = Complex<BigRational>;

/// Arithmetic needed by the series algebra.
pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    /// The imaginary unit.
    fn imag_unit() -> Self;
    /// Exact conversion from a rational `num/den`.
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Conversion from a float. Exact fields convert the binary value exactly.
    fn from_f64(x: f64) -> Self;
    /// Modulus as a float.
    fn magnitude(&self) -> f64;
    fn to_c64(&self) -> Complex64;
    fn is_exact_zero(&self) -> bool;
    /// `exp(i*theta)`. Exact fields only support multiples of pi/2.
    fn cis(theta: f64) -> Option<Self>;
    /// Complex conjugate.
    fn conj(&self) -> Self;
    /// Whether the value should be dropped under a magnitude threshold.
    fn negligible(&self, tol: f64) -> bool {
        self.is_exact_zero() || self.magnitude() < tol
    }
}

impl Coefficient for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn is_exact_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn cis(theta: f64) -> Option<Self> {
        Some(Complex64::from_polar(1.0, theta))
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
}

/// Returns `k` when `theta` is within `1e-12` of `k * pi / 2`.
pub fn quarter_turns(theta: f64) -> Option<i64> {
    let k = (theta / FRAC_PI_2).round();
    if (theta - k * FRAC_PI_2).abs() <= 1e-12 * theta.abs().max(1.0) {
        Some(k as i64)
    } else {
        None
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Coefficient for ExactComplex {
    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }
    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }
    fn from_f64(x: f64) -> Self {
        let re = BigRational::from_float(x).expect("finite float");
        Complex::new(re, BigRational::zero())
    }
    fn magnitude(&self) -> f64 {
        let re = rat_to_f64(&self.re);
        let im = rat_to_f64(&self.im);
        re.hypot(im)
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
    fn is_exact_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn cis(theta: f64) -> Option<Self> {
        let k = quarter_turns(theta)?;
        let one = BigRational::one();
        let zero = BigRational::zero();
        Some(match k.rem_euclid(4) {
            0 => Complex::new(one, zero),
            1 => Complex::new(zero, one),
            2 => Complex::new(-one, zero),
            _ => Complex::new(zero, -one),
        })
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
}

/// `n!` in the coefficient field.
pub fn factorial<C: Coefficient>(n: u32) -> C {
    (1..=n as i64).fold(C::one(), |acc, k| acc * C::from_i64(k))
}

/// Generalized binomial coefficient `binom(a, n)` for a rational `a = num/den`.
pub fn binomial<C: Coefficient>(num: i64, den: i64, n: u32) -> C {
    let mut acc = C::one();
    for j in 0..n as i64 {
        acc = acc * C::from_ratio(num - j * den, den) / C::from_i64(j + 1);
    }
    acc
}

/// Sign of the real part of an exact value, used in tests and reports.
pub fn exact_real_sign(c: &ExactComplex) -> i32 {
    if c.re.is_positive() {
        1
    } else if c.re.is_negative() {
        -1
    } else {
        0
    }
}
