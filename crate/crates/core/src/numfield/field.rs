use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Field, FromRational};
use crate::{Error, Rat, RatPoly, Result};

struct FieldData {
    min_poly: RatPoly,
    int_coeffs: Vec<BigInt>,
    hint: (Rat, Rat),
}

/// `Q(q)` for a real algebraic integer `q > 1`, given by its monic
/// irreducible minimal polynomial and an isolating interval for `q`.
///
/// Cheap to clone; elements hold a handle to their field.
#[derive(Clone)]
pub struct NumberField {
    inner: Arc<FieldData>,
}

impl NumberField {
    /// Builds the handle without validation; see [`super::field_new`].
    pub(crate) fn from_parts(min_poly: RatPoly, hint: (Rat, Rat)) -> Self {
        let int_coeffs = min_poly.coeffs().iter().map(|c| c.to_integer()).collect();
        NumberField {
            inner: Arc::new(FieldData { min_poly, int_coeffs, hint }),
        }
    }

    pub fn degree(&self) -> usize {
        self.inner.min_poly.degree().unwrap_or(0)
    }

    pub fn min_poly(&self) -> &RatPoly {
        &self.inner.min_poly
    }

    /// Integer coefficients of the minimal polynomial, lowest degree first.
    pub fn int_coeffs(&self) -> &[BigInt] {
        &self.inner.int_coeffs
    }

    pub fn root_hint(&self) -> (&Rat, &Rat) {
        (&self.inner.hint.0, &self.inner.hint.1)
    }

    pub fn same_as(&self, other: &NumberField) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.min_poly() == other.min_poly()
    }

    /// The distinguished generator `q`.
    pub fn gen(&self) -> FieldElem {
        self.elem(vec![Rat::zero(), Rat::one()])
    }

    pub fn one(&self) -> FieldElem {
        self.from_rat(Rat::one())
    }

    pub fn from_rat(&self, r: Rat) -> FieldElem {
        self.elem(vec![r])
    }

    /// `sum coords[k] q^k`, reduced modulo the minimal polynomial.
    pub fn elem(&self, coords: Vec<Rat>) -> FieldElem {
        FieldElem::reduced(Some(self.clone()), RatPoly::new(coords))
    }

    /// `q^e` for any integer exponent.
    pub fn gen_pow(&self, e: i64) -> FieldElem {
        let base = if e < 0 {
            self.gen().try_inv().expect("generator of a field is nonzero")
        } else {
            self.gen()
        };
        base.pow(e.unsigned_abs())
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({})", self.min_poly())
    }
}

/// An element `c_0 + c_1 q + ... + c_{D-1} q^{D-1}` of `Q(q)`.
///
/// Rational constants may be created without a field (`field == None`);
/// they combine with elements of any field.
#[derive(Clone)]
pub struct FieldElem {
    field: Option<NumberField>,
    poly: RatPoly,
}

impl FieldElem {
    fn reduced(field: Option<NumberField>, poly: RatPoly) -> Self {
        let poly = match &field {
            Some(k) if poly.degree().is_some_and(|d| d >= k.degree()) => {
                poly.div_rem(k.min_poly()).1
            }
            _ => poly,
        };
        FieldElem { field, poly }
    }

    pub fn rational(r: Rat) -> Self {
        FieldElem { field: None, poly: RatPoly::constant(r) }
    }

    pub fn field(&self) -> Option<&NumberField> {
        self.field.as_ref()
    }

    /// Power-basis coordinates, padded to `len`.
    pub fn coords(&self, len: usize) -> Vec<Rat> {
        (0..len.max(self.poly.coeffs().len())).map(|k| self.poly.coeff(k)).collect()
    }

    /// Coordinates without trailing zeros.
    pub fn raw_coords(&self) -> &[Rat] {
        self.poly.coeffs()
    }

    pub fn as_poly(&self) -> &RatPoly {
        &self.poly
    }

    pub fn is_rational(&self) -> bool {
        self.poly.is_constant()
    }

    pub fn to_rat(&self) -> Option<Rat> {
        self.is_rational().then(|| self.poly.coeff(0))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = FieldElem::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    pub fn pow_i(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.try_inv().ok_or(Error::DivisionByZero)?.pow(e.unsigned_abs()))
        }
    }

    pub fn checked_div(&self, rhs: &FieldElem) -> Result<Self> {
        let inv = rhs.try_inv().ok_or(Error::DivisionByZero)?;
        Ok(self.clone() * inv)
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator(&self) -> BigInt {
        use num_integer::Integer;
        self.poly
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    fn join(&self, other: &FieldElem) -> Option<NumberField> {
        match (&self.field, &other.field) {
            (Some(a), Some(b)) => {
                assert!(a.same_as(b), "mixing elements of different number fields");
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    /// Ordering by coordinates from the top down; only used for
    /// deterministic tie-breaking, not a field order.
    pub fn lex_cmp(&self, other: &FieldElem) -> Ordering {
        let n = self.poly.coeffs().len().max(other.poly.coeffs().len());
        (0..n)
            .rev()
            .map(|k| self.poly.coeff(k).cmp(&other.poly.coeff(k)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

/// Extended Euclid over `Q[x]`: returns `u` with `a*u = 1 mod m`.
fn inverse_mod(a: &RatPoly, m: &RatPoly) -> Option<RatPoly> {
    let (mut r0, mut r1) = (m.clone(), a.clone());
    let (mut t0, mut t1) = (RatPoly::zero(), RatPoly::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let t = &t0 - &(&q * &t1);
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    if r0.degree() != Some(0) {
        return None;
    }
    let c = r0.coeff(0);
    Some(t0.scale(&c.recip()).div_rem(m).1)
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}

impl Eq for FieldElem {}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.poly.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                if c.is_negative() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{a}*q")?,
                (_, true) => write!(f, "q^{k}")?,
                (_, false) => write!(f, "{a}*q^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Zero for FieldElem {
    fn zero() -> Self {
        FieldElem { field: None, poly: RatPoly::zero() }
    }

    fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

impl One for FieldElem {
    fn one() -> Self {
        FieldElem::rational(Rat::one())
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: FieldElem) -> FieldElem {
        let field = self.join(&rhs);
        FieldElem { field, poly: &self.poly + &rhs.poly }
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: FieldElem) -> FieldElem {
        let field = self.join(&rhs);
        FieldElem { field, poly: &self.poly - &rhs.poly }
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: FieldElem) -> FieldElem {
        let field = self.join(&rhs);
        FieldElem::reduced(field, &self.poly * &rhs.poly)
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { field: self.field, poly: -self.poly }
    }
}

impl Div for FieldElem {
    type Output = FieldElem;
    /// Panics on division by zero; use [`FieldElem::checked_div`] otherwise.
    fn div(self, rhs: FieldElem) -> FieldElem {
        self.checked_div(&rhs).expect("division by zero in Q(q)")
    }
}

impl Field for FieldElem {
    fn try_inv(&self) -> Option<Self> {
        if self.poly.is_zero() {
            return None;
        }
        if self.is_rational() {
            return Some(FieldElem { field: self.field.clone(), poly: RatPoly::constant(self.poly.coeff(0).recip()) });
        }
        let k = self.field.as_ref().expect("non-rational element without a field");
        inverse_mod(&self.poly, k.min_poly()).map(|u| FieldElem { field: Some(k.clone()), poly: u })
    }
}

impl FromRational for FieldElem {
    fn from_rat(r: &Rat) -> Self {
        FieldElem::rational(r.clone())
    }
}
