//! Integer-relation search by LLL on the lattice spanned by the rows
//! `(e_i, round(2^S x_i))`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::lll::{lll_reduce, IntLattice};
use crate::numfield::{FieldElem, NumberField};
use crate::serieval::{eval_base, RealBall};
use crate::{Error, Rat, Result};

/// Scale guard: lattice entries are `round(2^(prec - GUARD) x_i)`.
pub const GUARD_BITS: u32 = 16;

/// Outcome of one search. "Not found" means only that no relation with
/// `max |c| <= height` survived at this precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub found: bool,
    #[serde(serialize_with = "ser_ints")]
    pub coeffs: Vec<BigInt>,
    #[serde(serialize_with = "crate::equiv::ser_int")]
    pub height: BigInt,
    pub prec: u32,
    #[serde(serialize_with = "crate::equiv::ser_rat")]
    pub delta: Rat,
    pub residual: Option<RealBall>,
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn default_delta() -> Rat {
    Rat::new(BigInt::from(3), BigInt::from(4))
}

/// `sum c_j x_j` in ball arithmetic.
pub fn relation_residual(xs: &[RealBall], coeffs: &[BigInt]) -> RealBall {
    let p = xs.iter().map(|x| x.prec).max().unwrap_or(0);
    xs.iter()
        .zip(coeffs)
        .fold(RealBall::zero(p), |acc, (x, c)| acc.add(&x.mul_int(c)))
}

/// Smallest precision the search accepts for `len` values at `height`:
/// `4 log2(height) len` bits.
pub fn required_precision(len: usize, height: &BigInt) -> u32 {
    let h = height.to_f64().unwrap_or(f64::MAX).max(2.0);
    (4.0 * h.log2() * len as f64).ceil() as u32
}

fn precision_guard(len: usize, height: &BigInt, prec: u32) -> Result<()> {
    let need = required_precision(len, height);
    if prec < need {
        return Err(Error::PrecisionTooLow(format!(
            "{prec} bits cannot support height {height} with {len} values (need {need})"
        )));
    }
    Ok(())
}

/// Divides out the content and makes the first nonzero entry positive.
fn normalize(mut c: Vec<BigInt>) -> Vec<BigInt> {
    let g = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in c.iter_mut() {
            *x = &*x / &g;
        }
    }
    if c.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in c.iter_mut() {
            *x = -&*x;
        }
    }
    c
}

fn search(xs: &[RealBall], height: &BigInt, prec: u32, delta: &Rat) -> Result<RelationReport> {
    let s = prec.saturating_sub(GUARD_BITS);
    let n = xs.len();
    let rows: Vec<Vec<BigInt>> = xs
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let mut row: Vec<BigInt> = (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect();
            // round(mid * 2^s / 2^p)
            let scaled = if s >= x.prec {
                &x.mid << (s - x.prec)
            } else {
                let sh = x.prec - s;
                (&x.mid + (BigInt::one() << (sh - 1))) >> sh
            };
            row.push(scaled);
            row
        })
        .collect();
    let reduced = lll_reduce(&IntLattice::new(rows)?, delta)?;
    let threshold = Rat::new(BigInt::one(), BigInt::one() << (prec / 2));
    for row in &reduced.basis.basis {
        let c = &row[..n];
        if c.iter().all(Zero::is_zero) || c.iter().any(|x| x.abs() > *height) {
            continue;
        }
        let c = normalize(c.to_vec());
        let r = relation_residual(xs, &c);
        if r.abs_upper() <= threshold {
            return Ok(RelationReport {
                found: true,
                coeffs: c,
                height: height.clone(),
                prec,
                delta: delta.clone(),
                residual: Some(r),
            });
        }
    }
    Ok(RelationReport { found: false, coeffs: vec![], height: height.clone(), prec, delta: delta.clone(), residual: None })
}

/// Searches for `c` with `sum c_j x_j = 0` and `max |c_j| <= height`.
pub fn find_integer_relation(xs: &[RealBall], height: &BigInt, prec: u32) -> Result<RelationReport> {
    find_integer_relation_with(xs, height, prec, &default_delta())
}

pub fn find_integer_relation_with(
    xs: &[RealBall],
    height: &BigInt,
    prec: u32,
    delta: &Rat,
) -> Result<RelationReport> {
    if xs.len() < 2 {
        return Err(Error::Parse("relation search needs at least two values".into()));
    }
    precision_guard(xs.len(), height, prec)?;
    if let Some(x) = xs.iter().find(|x| !x.radius_at_most_pow2(prec as i64)) {
        return Err(Error::PrecisionTooLow(format!("input ball {x} is wider than 2^-{prec}")));
    }
    search(xs, height, prec, delta)
}

/// A `Q(q)`-linear relation `constant + sum k_j alpha_j = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldRelationReport {
    pub integer: RelationReport,
    #[serde(serialize_with = "ser_elem")]
    pub constant: Option<FieldElem>,
    #[serde(serialize_with = "ser_elems")]
    pub coeffs: Vec<FieldElem>,
}

fn ser_elem<S: serde::Serializer>(v: &Option<FieldElem>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        None => s.serialize_none(),
        Some(e) => s.collect_seq(crate::numfield::elem_to_strings(e)),
    }
}

fn ser_elems<S: serde::Serializer>(v: &[FieldElem], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(crate::numfield::elem_to_strings))
}

/// Expands each `alpha_j` into `q^t alpha_j` (and the constant into `q^t`),
/// `t < [Q(q):Q]`, and searches for a `Z`-relation among the expanded list.
///
/// The precision guard counts the `m + 1` coordinates over `Q(q)`, not the
/// expanded length.
pub fn falsify_over_field(
    values: &[RealBall],
    field: &NumberField,
    height: &BigInt,
    prec: u32,
) -> Result<FieldRelationReport> {
    falsify_over_field_with(values, field, height, prec, &default_delta())
}

pub fn falsify_over_field_with(
    values: &[RealBall],
    field: &NumberField,
    height: &BigInt,
    prec: u32,
    delta: &Rat,
) -> Result<FieldRelationReport> {
    if values.is_empty() {
        return Err(Error::Parse("falsification needs at least one value".into()));
    }
    precision_guard(values.len() + 1, height, prec)?;
    let dgr = field.degree();
    let w = values.iter().map(|v| v.prec).max().unwrap();
    let q = eval_base(field, w + 16)?;
    let powers: Vec<RealBall> = (0..dgr).map(|t| q.pow(t as u64)).collect();
    let mut expanded: Vec<RealBall> = powers.clone();
    for v in values {
        expanded.extend(powers.iter().map(|p| p.mul(v)));
    }
    let report = search(&expanded, height, prec, delta)?;
    if !report.found {
        return Ok(FieldRelationReport { integer: report, constant: None, coeffs: vec![] });
    }
    let elem = |chunk: &[BigInt]| field.elem(chunk.iter().map(|c| Rat::from_integer(c.clone())).collect());
    let constant = elem(&report.coeffs[..dgr]);
    let coeffs = report.coeffs[dgr..].chunks(dgr).map(elem).collect();
    Ok(FieldRelationReport { integer: report, constant: Some(constant), coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::field_new;
    use crate::scalar::{int, rat};
    use crate::RatPoly;

    #[test]
    fn sqrt2_relation() {
        let prec = 128;
        let two = RealBall::from_int(2, prec + 8);
        let r2 = two.sqrt().unwrap();
        let one = RealBall::from_int(1, prec + 8);
        let xs = vec![one.clone(), r2.clone(), one.add(&r2)];
        let rep = find_integer_relation(&xs, &BigInt::from(100), prec).unwrap();
        assert!(rep.found);
        assert_eq!(rep.coeffs, vec![BigInt::from(1), BigInt::from(1), BigInt::from(-1)]);
    }

    #[test]
    fn guard_refuses_low_precision() {
        let xs = vec![RealBall::from_int(1, 64), RealBall::from_int(2, 64)];
        assert!(matches!(find_integer_relation(&xs, &BigInt::from(1_000_000), 64), Err(Error::PrecisionTooLow(_))));
    }

    #[test]
    fn planted_field_relation() {
        let k = field_new(RatPoly::new(vec![int(-1), int(-1), int(1)]), (rat(3, 2), rat(17, 10))).unwrap();
        // alpha = -(k2 / k1) with k1 = 3 + 2q and k2 = -5 + 7q
        let k1 = k.elem(vec![int(3), int(2)]);
        let k2 = k.elem(vec![int(-5), int(7)]);
        let alpha = -(k2.clone() / k1.clone());
        let a = crate::serieval::eval_field_elem(&alpha, &k, 300).unwrap();
        let rep = falsify_over_field(&[a], &k, &BigInt::from(1000), 300).unwrap();
        assert!(rep.integer.found);
        let c = rep.constant.unwrap();
        let s = rep.coeffs[0].clone();
        // proportional to (k2, k1)
        assert_eq!(c * k1, s * k2);
    }
}
