//! Scalar traits shared by the polynomial and linear-algebra layers.
//!
//! Everything symbolic in this crate is written against [`Ring`] / [`Field`]
//! so the same code runs over exact rationals, number-field elements,
//! nested polynomials (bivariate arithmetic) and, for quick experiments,
//! `f32` / `f64`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::Rat;

/// A commutative ring with value semantics.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring + Div<Output = Self> {
    fn try_inv(&self) -> Option<Self>;
}

impl Field for Rat {
    fn try_inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

impl Field for f64 {
    fn try_inv(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
}

impl Field for f32 {
    fn try_inv(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
}

/// Embedding of the rationals into a scalar type.
pub trait FromRational: Sized {
    fn from_rat(r: &Rat) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rat(&Rat::from_integer(BigInt::from(n)))
    }
}

impl FromRational for Rat {
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
}

impl FromRational for f64 {
    fn from_rat(r: &Rat) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
}

impl FromRational for f32 {
    fn from_rat(r: &Rat) -> Self {
        r.to_f32().unwrap_or(f32::NAN)
    }
}

/// `n / d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as an exact rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"` into a rational in lowest terms.
pub fn parse_rat(s: &str) -> crate::Result<Rat> {
    let t = s.trim();
    let r: Rat = t
        .parse()
        .map_err(|_| crate::Error::Parse(format!("not a rational: {t:?}")))?;
    Ok(r)
}
