//! Arithmetic shared by the exact and the fitted recovery routes.

use std::fmt::Debug;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_algebra::{rational_to_f64, ExactValue, Rational};

/// A field-like value the invariant-recovery and classification code can
/// run on: [`ExactValue`] for closed-form inputs, `f64` for fitted ones.
pub trait Scalar: Clone + Debug + Serialize + Send + Sync {
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;
    fn zero() -> Self;
    /// `(4π)^{k/2}`.
    fn four_pi_pow_half(k: i64) -> Self;
    fn add(&self, other: &Self) -> Result<Self>;
    fn sub(&self, other: &Self) -> Result<Self>;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Result<Self>;
    fn scale(&self, q: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// `self ≤ tol`; with `tol = 0` on exact values this is an exact sign test.
    fn le_tol(&self, tol: f64) -> bool;
}

impl Scalar for ExactValue {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        ExactValue::rational(q.clone())
    }
    fn zero() -> Self {
        ExactValue::zero()
    }
    fn four_pi_pow_half(k: i64) -> Self {
        ExactValue::four_pi_pow_half(k)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        self.try_add(other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        self.try_sub(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Result<Self> {
        self.checked_div(other).ok_or(Error::SingularSystem)
    }
    fn scale(&self, q: &Rational) -> Self {
        ExactValue::scale(self, q)
    }
    fn to_f64(&self) -> f64 {
        ExactValue::to_f64(self)
    }
    fn le_tol(&self, tol: f64) -> bool {
        if tol == 0.0 {
            self.signum() <= 0
        } else {
            self.to_f64() <= tol
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }
    fn zero() -> Self {
        0.0
    }
    fn four_pi_pow_half(k: i64) -> Self {
        (4.0 * std::f64::consts::PI).powf(k as f64 / 2.0)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        Ok(self - other)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Result<Self> {
        if *other == 0.0 {
            Err(Error::SingularSystem)
        } else {
            Ok(self / other)
        }
    }
    fn scale(&self, q: &Rational) -> Self {
        self * rational_to_f64(q)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn le_tol(&self, tol: f64) -> bool {
        *self <= tol
    }
}
