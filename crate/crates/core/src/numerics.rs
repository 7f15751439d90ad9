//! Exact rationals and the combinatorial primitives every law is built from.
//!
//! Probabilities are carried as reduced big-integer fractions from input to
//! output. Floating point only appears when a value is rendered, or in the
//! explicitly asymptotic helpers (`central_binomial_asymptotic`, `ln_*`).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Result, WalkError};

/// Non-negative arbitrary-precision count (path counts, binomials).
pub type BigCount = BigUint;

/// Exact rational number, always in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ratio(BigRational);

impl Ratio {
    /// Panics if `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Ratio(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Ratio(BigRational::from_integer(n.into()))
    }

    pub fn from_count(n: &BigCount) -> Self {
        Ratio::from_integer(BigInt::from(n.clone()))
    }

    /// `num / den` for big counts; panics if `den` is zero.
    pub fn of_counts(num: &BigCount, den: &BigCount) -> Self {
        Ratio::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
    }

    pub fn zero() -> Self {
        Ratio(BigRational::zero())
    }

    pub fn one() -> Self {
        Ratio(BigRational::one())
    }

    pub fn half() -> Self {
        Ratio::new(1, 2)
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

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Ratio {
        Ratio(self.0.abs())
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn recip(&self) -> Option<Ratio> {
        if self.is_zero() {
            None
        } else {
            Some(Ratio(self.0.recip()))
        }
    }

    /// Integer power; negative exponents invert. Panics on `0^-k`.
    pub fn pow(&self, exp: i32) -> Ratio {
        Ratio(num_traits::Pow::pow(&self.0, exp))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // ToPrimitive gives up on huge operands; go through logs.
            let sign = if self.is_negative() { -1.0 } else { 1.0 };
            let ln = ln_big(&self.numer().abs().to_biguint().unwrap())
                - ln_big(&self.denom().to_biguint().unwrap());
            sign * ln.exp()
        })
    }

    /// Fixed-point rendering with `places` decimals, rounding half to even.
    pub fn to_decimal(&self, places: usize) -> String {
        let scale = BigInt::from(10u32).pow(places as u32);
        let num = self.numer().abs() * &scale;
        let den = self.denom();
        let (mut q, r) = num.div_rem(den);
        match (r.clone() * 2u32).cmp(den) {
            Ordering::Greater => q += 1u32,
            Ordering::Equal if q.is_odd() => q += 1u32,
            _ => {}
        }
        let digits = q.to_string();
        let body = if places == 0 {
            digits
        } else {
            let padded = format!("{:0>width$}", digits, width = places + 1);
            let (int, frac) = padded.split_at(padded.len() - places);
            format!("{int}.{frac}")
        };
        if self.is_negative() && !q.is_zero() {
            format!("-{body}")
        } else {
            body
        }
    }

    /// The decimal rendering parsed back into a float, so that the float
    /// carries exactly the digits that were printed.
    pub fn rounded_f64(&self, places: usize) -> f64 {
        self.to_decimal(places).parse().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Accepts `a/b` or a bare integer. Decimal literals are rejected so that
/// a probability such as `1/3` is never silently rounded.
impl FromStr for Ratio {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        let err = || WalkError::Parse(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = n.parse().map_err(|_| err())?;
        let den: BigInt = d.parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        Ok(Ratio::new(num, den))
    }
}

impl From<i64> for Ratio {
    fn from(n: i64) -> Self {
        Ratio::from_integer(n)
    }
}

impl From<BigCount> for Ratio {
    fn from(n: BigCount) -> Self {
        Ratio::from_integer(BigInt::from(n))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl<'a> $tr<&'a Ratio> for &'a Ratio {
            type Output = Ratio;
            fn $m(self, rhs: &'a Ratio) -> Ratio {
                Ratio((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Ratio> for Ratio {
            type Output = Ratio;
            fn $m(self, rhs: Ratio) -> Ratio {
                Ratio(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Ratio> for Ratio {
            type Output = Ratio;
            fn $m(self, rhs: &'a Ratio) -> Ratio {
                Ratio(self.0.$m(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Ratio {
    type Output = Ratio;
    fn neg(self) -> Ratio {
        Ratio(-self.0)
    }
}

impl std::iter::Sum for Ratio {
    fn sum<I: Iterator<Item = Ratio>>(iter: I) -> Ratio {
        iter.fold(Ratio::zero(), |acc, x| acc + x)
    }
}

/// A probability: an exact rational in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Prob(Ratio);

impl Prob {
    pub fn new(value: Ratio) -> Result<Self> {
        if value.is_negative() || value > Ratio::one() {
            return Err(WalkError::InvalidProb(value.to_string()));
        }
        Ok(Prob(value))
    }

    pub fn half() -> Self {
        Prob(Ratio::half())
    }

    pub fn value(&self) -> &Ratio {
        &self.0
    }

    pub fn complement(&self) -> Prob {
        Prob(Ratio::one() - &self.0)
    }

    pub fn is_half(&self) -> bool {
        self.0 == Ratio::half()
    }
}

impl FromStr for Prob {
    type Err = WalkError;
    fn from_str(s: &str) -> Result<Self> {
        Prob::new(s.parse()?)
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `C(n, k)`, zero when `k` lies outside `[0, n]`.
pub fn binomial(n: u64, k: i64) -> BigCount {
    if k < 0 || k as u64 > n {
        return BigCount::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigCount::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `n! / (parts[0]! * parts[1]! * ...)`.
pub fn multinomial(n: u64, parts: &[u64]) -> Result<BigCount> {
    let total: u64 = parts.iter().sum();
    if total != n {
        return Err(WalkError::PartsMismatch { expected: n, got: total });
    }
    let mut remaining = n;
    let mut acc = BigCount::one();
    for &part in parts {
        acc *= binomial(remaining, part as i64);
        remaining -= part;
    }
    Ok(acc)
}

pub fn factorial(n: u64) -> BigCount {
    (1..=n).fold(BigCount::one(), |acc, i| acc * i)
}

/// Generalized binomial coefficient `alpha (alpha-1) ... (alpha-n+1) / n!`
/// for a rational `alpha`.
pub fn generalized_binomial(alpha: &Ratio, n: u64) -> Ratio {
    let mut acc = Ratio::one();
    for j in 0..n {
        acc = acc * (alpha - &Ratio::from(j as i64)) / Ratio::from((j + 1) as i64);
    }
    acc
}

/// Natural logarithm of the Stirling form `4^n / sqrt(pi n)` of `C(2n, n)`.
/// Finite for every `n >= 1`.
pub fn ln_central_binomial_asymptotic(n: u64) -> f64 {
    let n = n as f64;
    n * 4f64.ln() - 0.5 * (std::f64::consts::PI * n).ln()
}

/// `4^n / sqrt(pi n)`. Overflows to infinity past n ~ 511; use
/// [`ln_central_binomial_asymptotic`] for larger `n`.
pub fn central_binomial_asymptotic(n: u64) -> f64 {
    ln_central_binomial_asymptotic(n).exp()
}

/// Natural logarithm of a big unsigned integer; `-inf` for zero.
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln(k!)` for `k = 0..=n`, accumulated in order.
pub fn ln_factorials(n: u64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = 0.0;
    out.push(acc);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// `2^k` as a big count.
pub fn pow2(k: u64) -> BigCount {
    BigCount::one() << k
}
