//! Midpoint-radius balls over fixed-point big integers.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::{Error, Rat, Result};

/// The real interval `[(mid - rad) / 2^prec, (mid + rad) / 2^prec]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealBall {
    pub mid: BigInt,
    pub rad: BigInt,
    pub prec: u32,
}

fn ceil_shr(x: &BigInt, s: u32) -> BigInt {
    // x >= 0
    let q: BigInt = x >> s;
    if (&q << s) == *x {
        q
    } else {
        q + 1u32
    }
}

impl RealBall {
    pub fn zero(prec: u32) -> Self {
        RealBall { mid: BigInt::zero(), rad: BigInt::zero(), prec }
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        RealBall { mid: n.into() << prec, rad: BigInt::zero(), prec }
    }

    /// Tightest ball at this scale; radius 0 when `r` is dyadic enough.
    pub fn from_rat(r: &Rat, prec: u32) -> Self {
        let scaled = r.numer() << prec;
        let (q, rem) = scaled.div_mod_floor(r.denom());
        let rad = if rem.is_zero() { BigInt::zero() } else { BigInt::one() };
        RealBall { mid: q, rad, prec }
    }

    /// Same value at scale `prec`, widened for rounding when coarsening.
    pub fn with_prec(&self, prec: u32) -> Self {
        if prec >= self.prec {
            let s = prec - self.prec;
            RealBall { mid: &self.mid << s, rad: &self.rad << s, prec }
        } else {
            let s = self.prec - prec;
            let mid = &self.mid >> s;
            let exact = (&mid << s) == self.mid;
            let rad = ceil_shr(&self.rad, s) + if exact { 0u32 } else { 1u32 };
            RealBall { mid, rad, prec }
        }
    }

    fn aligned(&self, other: &RealBall) -> (RealBall, RealBall) {
        let p = self.prec.max(other.prec);
        (self.with_prec(p), other.with_prec(p))
    }

    pub fn add(&self, o: &RealBall) -> RealBall {
        let (a, b) = self.aligned(o);
        RealBall { mid: a.mid + b.mid, rad: a.rad + b.rad, prec: a.prec }
    }

    pub fn sub(&self, o: &RealBall) -> RealBall {
        let (a, b) = self.aligned(o);
        RealBall { mid: a.mid - b.mid, rad: a.rad + b.rad, prec: a.prec }
    }

    pub fn neg(&self) -> RealBall {
        RealBall { mid: -&self.mid, ..self.clone() }
    }

    pub fn mul(&self, o: &RealBall) -> RealBall {
        let (a, b) = self.aligned(o);
        let p = a.prec;
        let prod = &a.mid * &b.mid;
        let mid = &prod >> p;
        let exact = (&mid << p) == prod;
        let err = a.mid.abs() * &b.rad + b.mid.abs() * &a.rad + &a.rad * &b.rad;
        let rad = ceil_shr(&err, p) + if exact { 0u32 } else { 1u32 };
        RealBall { mid, rad, prec: p }
    }

    pub fn mul_int(&self, n: &BigInt) -> RealBall {
        RealBall { mid: &self.mid * n, rad: &self.rad * n.abs(), prec: self.prec }
    }

    /// Exact multiplication by `2^k` for any integer `k`.
    pub fn mul_pow2(&self, k: i64) -> RealBall {
        if k >= 0 {
            RealBall { mid: &self.mid << k as u64, rad: &self.rad << k as u64, prec: self.prec }
        } else {
            let extra = (-k) as u32;
            RealBall { prec: self.prec + extra, ..self.clone() }.with_prec(self.prec)
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn div(&self, o: &RealBall) -> Result<RealBall> {
        let (a, b) = self.aligned(o);
        let p = a.prec;
        let bm = b.mid.abs();
        if bm <= b.rad {
            return Err(Error::DivisionByZero);
        }
        let mid = (&a.mid << p).div_floor(&b.mid);
        let num = (&a.rad * &bm + a.mid.abs() * &b.rad) << p;
        let den = &bm * (&bm - &b.rad);
        let rad = num.div_ceil(&den) + 1u32;
        Ok(RealBall { mid, rad, prec: p })
    }

    pub fn inv(&self) -> Result<RealBall> {
        RealBall::from_int(1, self.prec).div(self)
    }

    pub fn pow(&self, mut e: u64) -> RealBall {
        let mut base = self.clone();
        let mut acc = RealBall::from_int(1, self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self^e` for any integer `e`.
    pub fn powi(&self, e: i64) -> Result<RealBall> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Square root of a ball bounded away from zero.
    pub fn sqrt(&self) -> Result<RealBall> {
        let p = self.prec;
        let lo = &self.mid - &self.rad;
        if !lo.is_positive() {
            return Err(Error::PrecisionExhausted("square root of a ball touching zero".into()));
        }
        let mid = (&self.mid << p).sqrt();
        let den = (&lo << p).sqrt();
        if den.is_zero() {
            return Err(Error::PrecisionExhausted("square root of a ball near zero".into()));
        }
        let rad = (&self.rad << p).div_ceil(&den) + 1u32;
        Ok(RealBall { mid, rad, prec: p })
    }

    pub fn lower(&self) -> Rat {
        Rat::new(&self.mid - &self.rad, BigInt::one() << self.prec)
    }

    pub fn upper(&self) -> Rat {
        Rat::new(&self.mid + &self.rad, BigInt::one() << self.prec)
    }

    /// Upper bound on `|x|` for every `x` in the ball.
    pub fn abs_upper(&self) -> Rat {
        Rat::new(self.mid.abs() + &self.rad, BigInt::one() << self.prec)
    }

    /// `2 * rad / 2^prec`.
    pub fn width(&self) -> Rat {
        Rat::new(&self.rad * 2u32, BigInt::one() << self.prec)
    }

    /// True when the width is at most `2^-k`.
    pub fn width_at_most_pow2(&self, k: i64) -> bool {
        // 2 rad 2^k <= 2^prec
        let lhs = &self.rad * 2u32;
        let e = self.prec as i64 - k;
        if e >= 0 {
            lhs <= BigInt::one() << e as u64
        } else {
            (lhs << (-e) as u64) <= BigInt::one() && self.rad.is_zero()
        }
    }

    /// True when the radius is at most `2^-k`.
    pub fn radius_at_most_pow2(&self, k: i64) -> bool {
        let e = self.prec as i64 - k;
        if e >= 0 {
            self.rad <= BigInt::one() << e as u64
        } else {
            self.rad.is_zero()
        }
    }

    /// Whether `other` lies inside this ball.
    pub fn contains_ball(&self, other: &RealBall) -> bool {
        let (a, b) = self.aligned(other);
        (&b.mid - &b.rad) >= (&a.mid - &a.rad) && (&b.mid + &b.rad) <= (&a.mid + &a.rad)
    }

    pub fn contains_rat(&self, r: &Rat) -> bool {
        *r >= self.lower() && *r <= self.upper()
    }

    /// Widens the radius by `extra` units of `2^-prec`.
    pub fn inflate(&self, extra: &BigInt) -> RealBall {
        RealBall { rad: &self.rad + extra, ..self.clone() }
    }

    pub fn mid_f64(&self) -> f64 {
        crate::numfield::scaled_f64(&self.mid, self.prec)
    }

    /// Midpoint with `digits` decimals, truncated toward negative infinity.
    pub fn mid_decimal(&self, digits: usize) -> String {
        let ten = num_traits::pow(BigInt::from(10), digits);
        let scaled = (&self.mid * &ten).div_floor(&(BigInt::one() << self.prec));
        let (int_part, frac) = scaled.div_mod_floor(&ten);
        let frac_s = frac.to_string();
        let pad = "0".repeat(digits.saturating_sub(frac_s.len()));
        // a negative value with a floor split needs care: -0.5 -> (-1, 5)
        if int_part.sign() == Sign::Minus && !frac.is_zero() {
            let neg = (-&scaled).div_mod_floor(&ten);
            let fs = neg.1.to_string();
            let pad = "0".repeat(digits.saturating_sub(fs.len()));
            return format!("-{}.{}{}", neg.0, pad, fs);
        }
        if digits == 0 {
            return int_part.to_string();
        }
        format!("{int_part}.{pad}{frac_s}")
    }

    /// Number of decimals justified by the working scale.
    pub fn natural_digits(&self) -> usize {
        (self.prec as f64 * std::f64::consts::LOG10_2).floor() as usize
    }

    pub fn rad_f64(&self) -> f64 {
        crate::numfield::scaled_f64(&self.rad, self.prec)
    }
}

impl fmt::Display for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:e}", self.mid_decimal(self.natural_digits()), self.rad_f64())
    }
}

impl Serialize for RealBall {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RealBall", 5)?;
        st.serialize_field("decimal", &self.mid_decimal(self.natural_digits()))?;
        st.serialize_field("radius", &format!("{:e}", self.rad_f64()))?;
        st.serialize_field("mid_hex", &self.mid.to_str_radix(16))?;
        st.serialize_field("rad_hex", &self.rad.to_str_radix(16))?;
        st.serialize_field("prec", &self.prec)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn arithmetic_encloses() {
        let p = 80;
        let third = RealBall::from_rat(&rat(1, 3), p);
        let three = RealBall::from_int(3, p);
        let one = third.mul(&three);
        assert!(one.contains_rat(&rat(1, 1)));
        let back = one.div(&three).unwrap();
        assert!(back.contains_rat(&rat(1, 3)));
        let two = RealBall::from_int(2, p);
        let r = two.sqrt().unwrap();
        let sq = r.mul(&r);
        assert!(sq.contains_rat(&rat(2, 1)));
        assert!(r.radius_at_most_pow2(70));
        assert!(two.inv().unwrap().contains_rat(&rat(1, 2)));
    }

    #[test]
    fn decimal_output() {
        let b = RealBall::from_rat(&rat(-1, 4), 20);
        assert_eq!(b.mid_decimal(3), "-0.250");
        let b = RealBall::from_rat(&rat(5, 4), 20);
        assert_eq!(b.mid_decimal(2), "1.25");
        assert_eq!(RealBall::from_int(7, 10).mid_decimal(0), "7");
    }

    #[test]
    fn coarsening_keeps_value() {
        let b = RealBall::from_rat(&rat(1, 3), 100);
        let c = b.with_prec(20);
        assert!(c.contains_ball(&b));
    }
}
