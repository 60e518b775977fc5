//! Exact scalars of the form `q · π^{k/2}`.
//!
//! Every closed-form heat coefficient on the model catalog is a rational
//! multiple of a half-integer power of π, so this is the only exact carrier
//! the rest of the crate needs.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shorthand used throughout the crate.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    // Direct conversion handles the huge-numerator cases better than num/den.
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Parses `"3"`, `"-7/4"` or a finite decimal such as `"0.125"` / `"1e-3"`
/// into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (
            &s[..i],
            s[i + 1..]
                .parse::<i32>()
                .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?,
        ),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(Error::Parse(format!("not a number: {s:?}")));
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().unwrap() / 10;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = BigRational::from_integer(all);
    if scale >= 0 {
        q *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -q } else { q })
}

/// `coeff · π^{pi_half_exponent / 2}`; zero is always stored with exponent 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactValue {
    coeff: Rational,
    pi_half_exponent: i64,
}

impl ExactValue {
    pub fn new(coeff: Rational, pi_half_exponent: i64) -> Self {
        if coeff.is_zero() {
            Self::zero()
        } else {
            Self {
                coeff,
                pi_half_exponent,
            }
        }
    }

    pub fn zero() -> Self {
        Self {
            coeff: Rational::zero(),
            pi_half_exponent: 0,
        }
    }

    pub fn rational(coeff: Rational) -> Self {
        Self::new(coeff, 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(int(n))
    }

    /// `π^{k/2}`.
    pub fn pi_pow_half(k: i64) -> Self {
        Self::new(Rational::one(), k)
    }

    /// `(4π)^{k/2} = 2^k · π^{k/2}`.
    pub fn four_pi_pow_half(k: i64) -> Self {
        let two = BigInt::from(2);
        let coeff = if k >= 0 {
            BigRational::from_integer(num_traits::pow(two, k as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(two, (-k) as usize))
        };
        Self::new(coeff, k)
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn pi_half_exponent(&self) -> i64 {
        self.pi_half_exponent
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.coeff.is_positive()
    }

    pub fn signum(&self) -> i32 {
        if self.coeff.is_zero() {
            0
        } else if self.coeff.is_positive() {
            1
        } else {
            -1
        }
    }

    /// The rational value, if there is no π factor.
    pub fn as_rational(&self) -> Option<&Rational> {
        (self.pi_half_exponent == 0).then_some(&self.coeff)
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.coeff) * std::f64::consts::PI.powf(self.pi_half_exponent as f64 / 2.0)
    }

    /// Sum of two values; `None` when both are nonzero with different π powers.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        (self.pi_half_exponent == other.pi_half_exponent)
            .then(|| Self::new(&self.coeff + &other.coeff, self.pi_half_exponent))
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.checked_add(&-other.clone())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.checked_add(other).ok_or_else(|| Error::MixedPiPowers {
            left: self.pi_half_exponent,
            right: other.pi_half_exponent,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other.clone())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(&self.coeff * q, self.pi_half_exponent)
    }

    pub fn recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self::new(self.coeff.recip(), -self.pi_half_exponent))
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        other.recip().map(|r| self * &r)
    }

    pub fn abs(&self) -> Self {
        Self::new(self.coeff.abs(), self.pi_half_exponent)
    }

    /// Exact sign comparison; π^{k/2} > 0 so only the coefficient sign and,
    /// for equal exponents, the coefficients matter. Mixed exponents fall
    /// back to floating comparison.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        if let Some(d) = self.checked_sub(other) {
            return d.signum().cmp(&0);
        }
        self.to_f64()
            .partial_cmp(&other.to_f64())
            .unwrap_or(Ordering::Equal)
    }
}

impl Default for ExactValue {
    fn default() -> Self {
        Self::zero()
    }
}

impl Neg for ExactValue {
    type Output = ExactValue;
    fn neg(self) -> ExactValue {
        ExactValue::new(-self.coeff, self.pi_half_exponent)
    }
}

impl Mul for &ExactValue {
    type Output = ExactValue;
    fn mul(self, rhs: &ExactValue) -> ExactValue {
        ExactValue::new(
            &self.coeff * &rhs.coeff,
            self.pi_half_exponent + rhs.pi_half_exponent,
        )
    }
}

impl Mul for ExactValue {
    type Output = ExactValue;
    fn mul(self, rhs: ExactValue) -> ExactValue {
        &self * &rhs
    }
}

impl From<Rational> for ExactValue {
    fn from(q: Rational) -> Self {
        Self::rational(q)
    }
}

impl fmt::Display for ExactValue {
    /// `-1/4·√π`, `1/6`, `2·π`, `3·π^(3/2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let k = self.pi_half_exponent;
        let pi = match k {
            0 => String::new(),
            1 => "√π".to_string(),
            2 => "π".to_string(),
            _ if k % 2 == 0 => format!("π^{}", k / 2),
            _ => format!("π^({k}/2)"),
        };
        if pi.is_empty() {
            write!(f, "{}", self.coeff)
        } else if self.coeff.is_one() {
            write!(f, "{pi}")
        } else if (-self.coeff.clone()).is_one() {
            write!(f, "-{pi}")
        } else {
            write!(f, "{}·{pi}", self.coeff)
        }
    }
}

/// JSON shape of an exact value: `{num, den, pi_half_exponent, float}`.
/// `num` and `den` are decimal strings so arbitrarily large integers survive.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ExactJson {
    pub num: String,
    pub den: String,
    pub pi_half_exponent: i64,
    #[serde(default)]
    pub float: Option<f64>,
}

impl From<&ExactValue> for ExactJson {
    fn from(v: &ExactValue) -> Self {
        Self {
            num: v.coeff.numer().to_string(),
            den: v.coeff.denom().to_string(),
            pi_half_exponent: v.pi_half_exponent,
            float: Some(v.to_f64()),
        }
    }
}

impl TryFrom<&ExactJson> for ExactValue {
    type Error = Error;
    fn try_from(j: &ExactJson) -> Result<Self> {
        let q = parse_rational(&format!("{}/{}", j.num, j.den))?;
        Ok(ExactValue::new(q, j.pi_half_exponent))
    }
}

impl Serialize for ExactValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExactJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ExactJson::deserialize(d)?;
        ExactValue::try_from(&j).map_err(serde::de::Error::custom)
    }
}

/// JSON shape of a bare rational: `{num, den}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RationalJson {
    fn from(q: &Rational) -> Self {
        Self {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}
