//! Exact univariate polynomials over the rationals: affine composition,
//! integer-valuedness, rational roots and the JSON coefficient format.

mod poly;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

pub use poly::Poly;

use crate::scalar::{int, parse_rat};
use crate::{Error, Rat, RatPoly, Result};

/// The map `x -> b*x + c` with `b > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub b: Rat,
    pub c: Rat,
}

impl AffineMap {
    pub fn new(b: Rat, c: Rat) -> Result<Self> {
        if !b.is_positive() {
            return Err(Error::NonPositive(b.to_string()));
        }
        Ok(AffineMap { b, c })
    }

    pub fn identity() -> Self {
        AffineMap { b: Rat::one(), c: Rat::zero() }
    }

    pub fn apply(&self, x: &Rat) -> Rat {
        &self.b * x + &self.c
    }

    /// `x -> self(inner(x))`.
    pub fn after(&self, inner: &AffineMap) -> AffineMap {
        AffineMap {
            b: &self.b * &inner.b,
            c: &self.b * &inner.c + &self.c,
        }
    }
}

/// `x -> f(b*x + c)`.
pub fn affine_compose(f: &RatPoly, m: &AffineMap) -> RatPoly {
    f.compose_affine(&m.b, &m.c)
}

/// Horner evaluation.
pub fn eval(f: &RatPoly, x: &Rat) -> Rat {
    f.eval(x)
}

/// Coefficients `c_0..c_d` with `f(x) = sum c_k * C(x, k)`, obtained as the
/// forward differences of `f` at zero.
pub fn binomial_basis(f: &RatPoly) -> Vec<Rat> {
    let Some(d) = f.degree() else {
        return Vec::new();
    };
    let mut vals: Vec<Rat> = (0..=d as i64).map(|n| f.eval(&int(n))).collect();
    let mut out = Vec::with_capacity(d + 1);
    for _ in 0..=d {
        out.push(vals[0].clone());
        vals = vals.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    out
}

/// `C(x, k) = x (x-1) ... (x-k+1) / k!` as a polynomial.
pub fn binomial_poly(k: usize) -> RatPoly {
    let mut p = RatPoly::one();
    for i in 0..k {
        let factor = RatPoly::new(vec![int(-(i as i64)), Rat::one()]);
        p = &p * &factor;
        p = p.scale(&Rat::new(BigInt::one(), BigInt::from(i + 1)));
    }
    p
}

/// Inverse of [`binomial_basis`].
pub fn from_binomial_basis(cs: &[Rat]) -> RatPoly {
    cs.iter()
        .enumerate()
        .fold(RatPoly::zero(), |acc, (k, c)| &acc + &binomial_poly(k).scale(c))
}

/// True iff `f(n)` is an integer for every positive integer `n`.
pub fn is_integer_valued(f: &RatPoly) -> bool {
    binomial_basis(f).iter().all(|c| c.is_integer())
}

/// The positive rational `s` with `s^d = r`, if it exists.
pub fn rational_dth_root(r: &Rat, d: u32) -> Result<Option<Rat>> {
    if !r.is_positive() {
        return Err(Error::NonPositive(r.to_string()));
    }
    if d == 0 {
        return Err(Error::InvalidPolynomial("root of order zero".into()));
    }
    let root_of = |n: &BigInt| -> Option<BigInt> {
        let s = n.nth_root(d);
        (num_traits::pow(s.clone(), d as usize) == *n).then_some(s)
    };
    let (Some(num), Some(den)) = (root_of(r.numer()), root_of(r.denom())) else {
        return Ok(None);
    };
    Ok(Some(Rat::new(num, den)))
}

/// Clears denominators: the primitive-free integer multiple `L*f` with `L`
/// the lcm of the coefficient denominators.
pub fn clear_denominators(f: &RatPoly) -> Vec<BigInt> {
    let l = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    f.coeffs()
        .iter()
        .map(|c| (c * Rat::from_integer(l.clone())).to_integer())
        .collect()
}

const ROOT_SCAN_LIMIT: u64 = 1 << 22;

/// All integer roots of a nonzero polynomial, ascending.
pub fn integer_roots(f: &RatPoly) -> Result<Vec<i64>> {
    if f.is_zero() {
        return Err(Error::InvalidPolynomial("integer roots of the zero polynomial".into()));
    }
    let mut coeffs = clear_denominators(f);
    let mut roots = Vec::new();
    let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        roots.push(0);
        coeffs.drain(..zeros);
    }
    if coeffs.len() > 1 {
        let trailing = coeffs[0].abs();
        let candidates = divisors(&trailing)?;
        let p = RatPoly::new(coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect());
        for dv in candidates {
            for cand in [dv, -dv] {
                if p.eval(&int(cand)).is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort_unstable();
    roots.dedup();
    Ok(roots)
}

fn divisors(n: &BigInt) -> Result<Vec<i64>> {
    let n = n
        .to_u64()
        .filter(|&v| v <= (i64::MAX as u64))
        .ok_or_else(|| Error::InvalidPolynomial(format!("trailing coefficient {n} too large")))?;
    let mut out = Vec::new();
    let mut k = 1u64;
    while k * k <= n {
        if k > ROOT_SCAN_LIMIT {
            return Err(Error::InvalidPolynomial(format!(
                "trailing coefficient {n} too large for divisor enumeration"
            )));
        }
        if n % k == 0 {
            out.push(k as i64);
            out.push((n / k) as i64);
        }
        k += 1;
    }
    Ok(out)
}

/// Checks the standing hypotheses on an order polynomial: integer-valued,
/// degree at least two, positive leading coefficient.
pub fn validate_order_poly(f: &RatPoly) -> Result<()> {
    match f.degree() {
        Some(d) if d >= 2 => {}
        _ => return Err(Error::InvalidPolynomial(format!("degree < 2: {f}"))),
    }
    if !f.lead().unwrap().is_positive() {
        return Err(Error::InvalidPolynomial(format!("non-positive leading coefficient: {f}")));
    }
    if !is_integer_valued(f) {
        return Err(Error::InvalidPolynomial(format!("not integer-valued: {f}")));
    }
    Ok(())
}

/// Ordering used wherever a deterministic representative is needed:
/// degree, then leading coefficient, then coefficients from the top down.
pub fn canonical_cmp(a: &RatPoly, b: &RatPoly) -> std::cmp::Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| a.lead().cmp(&b.lead()))
        .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

/// `a / b` rounded toward negative infinity.
pub fn floor_rat(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

/// Parses a polynomial from coefficient strings, lowest degree first.
pub fn parse_poly(coeffs: &[String]) -> Result<RatPoly> {
    Ok(RatPoly::new(coeffs.iter().map(|s| parse_rat(s)).collect::<Result<_>>()?))
}

/// Coefficient strings, lowest degree first; the zero polynomial is `[]`.
pub fn poly_to_strings(f: &RatPoly) -> Vec<String> {
    f.coeffs().iter().map(|c| c.to_string()).collect()
}

impl Serialize for Poly<Rat> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs().len()))?;
        for c in self.coeffs() {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Poly<Rat> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        parse_poly(&raw).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn p(cs: &[i64]) -> RatPoly {
        RatPoly::new(cs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn affine_compose_examples() {
        let one = AffineMap::new(int(1), int(1)).unwrap();
        assert_eq!(affine_compose(&p(&[0, 0, 1]), &one), p(&[1, 2, 1]));
        let half = AffineMap::new(rat(1, 2), int(0)).unwrap();
        assert_eq!(affine_compose(&p(&[0, 0, 4]), &half), p(&[0, 0, 1]));
        let back = AffineMap::new(int(1), int(-1)).unwrap();
        assert_eq!(affine_compose(&p(&[0, 1, 1]), &back), p(&[0, -1, 1]));
    }

    #[test]
    fn affine_map_rejects_nonpositive_slope() {
        assert!(AffineMap::new(int(0), int(1)).is_err());
        assert!(AffineMap::new(int(-2), int(1)).is_err());
    }

    #[test]
    fn integer_valued_examples() {
        let tri = RatPoly::new(vec![int(0), rat(1, 2), rat(1, 2)]);
        assert!(is_integer_valued(&tri));
        assert!(!is_integer_valued(&RatPoly::new(vec![int(0), rat(1, 2)])));
        assert!(is_integer_valued(&p(&[0, 0, 1])));
    }

    #[test]
    fn binomial_basis_examples() {
        assert_eq!(binomial_basis(&p(&[0, 0, 1])), vec![int(0), int(1), int(2)]);
        assert_eq!(binomial_basis(&p(&[5])), vec![int(5)]);
        let tri = RatPoly::new(vec![int(0), rat(1, 2), rat(1, 2)]);
        assert_eq!(binomial_basis(&tri), vec![int(0), int(1), int(1)]);
        assert!(binomial_basis(&RatPoly::zero()).is_empty());
    }

    #[test]
    fn dth_root_examples() {
        assert_eq!(rational_dth_root(&rat(1, 4), 2).unwrap(), Some(rat(1, 2)));
        assert_eq!(rational_dth_root(&int(1), 7).unwrap(), Some(int(1)));
        assert_eq!(rational_dth_root(&int(2), 2).unwrap(), None);
        assert!(rational_dth_root(&int(0), 2).is_err());
        assert!(rational_dth_root(&int(-8), 3).is_err());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval(&p(&[0, 0, 1]), &int(3)), int(9));
        assert_eq!(eval(&p(&[0, 1, 1]), &int(2)), int(6));
        assert_eq!(eval(&RatPoly::zero(), &rat(7, 3)), int(0));
    }

    #[test]
    fn integer_roots_found() {
        // (x - 3)(x + 2)(2x - 1) x
        let f = &(&p(&[-3, 1]) * &p(&[2, 1])) * &(&p(&[-1, 2]) * &p(&[0, 1]));
        assert_eq!(integer_roots(&f).unwrap(), vec![-2, 0, 3]);
        assert!(integer_roots(&p(&[7])).unwrap().is_empty());
    }

    #[test]
    fn json_format() {
        let f = p(&[0, 0, 1]);
        assert_eq!(serde_json::to_string(&f).unwrap(), r#"["0","0","1"]"#);
        let g: RatPoly = serde_json::from_str(r#"["1/2","-3","0"]"#).unwrap();
        assert_eq!(g, RatPoly::new(vec![rat(1, 2), int(-3)]));
        assert!(serde_json::from_str::<RatPoly>(r#"["x"]"#).is_err());
    }

    #[test]
    fn canonical_order_is_degree_first() {
        use std::cmp::Ordering;
        assert_eq!(canonical_cmp(&p(&[0, 0, 9]), &p(&[0, 0, 0, 1])), Ordering::Less);
        assert_eq!(canonical_cmp(&p(&[0, 0, 1]), &p(&[0, 0, 4])), Ordering::Less);
    }
}
