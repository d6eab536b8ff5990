//! Exact arithmetic substrate: nonnegative arbitrary-precision rationals
//! and binomial coefficients.
//!
//! Every light transmission and contrast in this crate is a probability or
//! a ratio of probabilities, so the domain is restricted to values `>= 0`.
//! A subtraction that would go negative is reported as an error rather
//! than represented; upstream it signals a violated `T(s=0) >= T(s=1)`
//! expectation.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A nonnegative rational number, always stored in reduced form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ratio(BigRational);

impl Ratio {
    /// Builds `num/den`, reduced. Fails on a zero denominator or a
    /// negative value.
    pub fn new(num: i64, den: i64) -> Result<Ratio> {
        Self::from_bigint(BigInt::from(num), BigInt::from(den))
    }

    pub fn from_bigint(num: BigInt, den: BigInt) -> Result<Ratio> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let r = BigRational::new(num, den);
        if r.is_negative() {
            return Err(Error::NegativeValue(
                r.numer().to_string(),
                r.denom().to_string(),
            ));
        }
        Ok(Ratio(r))
    }

    pub fn zero() -> Ratio {
        Ratio(BigRational::zero())
    }

    pub fn one() -> Ratio {
        Ratio(BigRational::one())
    }

    pub fn from_integer(n: u64) -> Ratio {
        Ratio(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `self - other`, failing if the result would be negative.
    pub fn checked_sub(&self, other: &Ratio) -> Result<Ratio> {
        if self.0 < other.0 {
            return Err(Error::NegativeValue(
                (&other.0 - &self.0).numer().to_string(),
                (&other.0 - &self.0).denom().to_string(),
            ));
        }
        Ok(Ratio(&self.0 - &other.0))
    }

    /// `self / other`, failing if `other` is zero.
    pub fn checked_div(&self, other: &Ratio) -> Result<Ratio> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Ratio(&self.0 / &other.0))
    }

    /// `(1/2)^exp`.
    pub fn half_pow(exp: u32) -> Ratio {
        Ratio(BigRational::new(
            BigInt::one(),
            BigInt::from(2u8).pow(exp),
        ))
    }

    /// Numerator and denominator as machine integers, when they fit.
    pub fn as_u64_pair(&self) -> Option<(u64, u64)> {
        Some((self.0.numer().to_u64()?, self.0.denom().to_u64()?))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().expect("rational out of f64 range")
    }

    /// Exact decimal rendering with `places` digits after the point,
    /// rounded half up.
    pub fn to_decimal(&self, places: usize) -> String {
        let scale = BigInt::from(10u8).pow(places as u32);
        // round(self * 10^places)
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        let twice = scaled.numer() * 2 + scaled.denom();
        let rounded: BigInt = twice / (scaled.denom() * 2);
        let digits = rounded.to_string();
        if places == 0 {
            return digits;
        }
        let digits = if digits.len() <= places {
            format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
        } else {
            digits
        };
        let split = digits.len() - places;
        format!("{}.{}", &digits[..split], &digits[split..])
    }
}

impl Add<&Ratio> for &Ratio {
    type Output = Ratio;

    fn add(self, rhs: &Ratio) -> Ratio {
        Ratio(&self.0 + &rhs.0)
    }
}

impl Mul<&Ratio> for &Ratio {
    type Output = Ratio;

    fn mul(self, rhs: &Ratio) -> Ratio {
        Ratio(&self.0 * &rhs.0)
    }
}

impl fmt::Display for Ratio {
    /// Canonical `num/den` form, e.g. `2/29`; zero renders as `0/1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// Binomial coefficient `C(n, k)`, zero when `k` is out of range.
pub fn binom(n: u32, k: i64) -> BigUint {
    if k < 0 || k as u64 > n as u64 {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k as u64))
}

/// `C(n, k)` as an exact Ratio over `C(m, k)`.
pub fn binom_ratio(n: u32, m: u32, k: i64) -> Result<Ratio> {
    let den = binom(m, k);
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ratio::from_bigint(BigInt::from(binom(n, k)), BigInt::from(den))
}
