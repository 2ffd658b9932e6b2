//! The equivalence `F ~ G` (`F(x) = G(bx + c) + d`), its shift-condition
//! variant, and canonical representatives of equivalence classes.

mod condition;
mod shift;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub use condition::{
    check_condition_i, check_condition_i_all_subsets, condition_i_analysis, lemma2_witness,
    verify_certificate, ConditionIAnalysis, ConditionICertificate, Lemma2Member, PairCheck,
    SubsetSweep, SUBSET_CAP,
};
pub use shift::{shift_solutions, shift_witness, ShiftKind, ShiftSolutionSet, ShiftWitness};

use crate::polyq::{affine_compose, canonical_cmp, rational_dth_root, AffineMap};
use crate::{Error, Rat, RatPoly, Result};

/// `F(x) = G(b x + c) + d` with `b > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivWitness {
    #[serde(serialize_with = "ser_rat")]
    pub b: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub c: Rat,
    #[serde(serialize_with = "ser_int")]
    pub d: BigInt,
}

pub(crate) fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub(crate) fn ser_int<S: serde::Serializer>(r: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl EquivWitness {
    /// Checks `F(x) = G(b x + c) + d` identically.
    pub fn verify(&self, f: &RatPoly, g: &RatPoly) -> bool {
        self.b.is_positive() && *f == self.rhs(g)
    }

    fn rhs(&self, g: &RatPoly) -> RatPoly {
        let m = AffineMap { b: self.b.clone(), c: self.c.clone() };
        affine_compose(g, &m) + RatPoly::constant(Rat::from_integer(self.d.clone()))
    }

    /// Witness for `G ~ F`.
    pub fn inverse(&self) -> EquivWitness {
        let b = self.b.recip();
        EquivWitness { c: -&self.c * &b, b, d: -&self.d }
    }

    /// Given `self: F ~ G` and `next: G ~ H`, the witness for `F ~ H`.
    pub fn then(&self, next: &EquivWitness) -> EquivWitness {
        EquivWitness {
            b: &self.b * &next.b,
            c: &next.b * &self.c + &next.c,
            d: &self.d + &next.d,
        }
    }
}

fn check_nonconstant_positive(f: &RatPoly) -> Result<usize> {
    match (f.degree(), f.lead()) {
        (Some(d), Some(l)) if d >= 1 && l.is_positive() => Ok(d),
        _ => Err(Error::InvalidPolynomial(format!(
            "expected a nonconstant polynomial with positive leading coefficient, got {f}"
        ))),
    }
}

/// The forced `b` and `c` of a putative witness `F(x) = G(b x + c) + d`,
/// from the two top coefficients. `None` when `b` is irrational.
pub(crate) fn forced_affine(f: &RatPoly, g: &RatPoly, d: usize) -> Result<Option<(Rat, Rat)>> {
    let ratio = f.lead().unwrap() / g.lead().unwrap();
    let Some(b) = rational_dth_root(&ratio, d as u32)? else {
        return Ok(None);
    };
    let bd1 = num_traits::pow(b.clone(), d - 1);
    let dd = Rat::from_integer(BigInt::from(d));
    let c = (f.coeff(d - 1) - g.coeff(d - 1) * &bd1) / (dd * g.coeff(d) * &bd1);
    Ok(Some((b, c)))
}

/// Decides `F ~ G`, returning a witness when it holds.
pub fn decide_equiv(f: &RatPoly, g: &RatPoly) -> Result<Option<EquivWitness>> {
    let df = check_nonconstant_positive(f)?;
    let dg = check_nonconstant_positive(g)?;
    if df != dg {
        return Ok(None);
    }
    let Some((b, c)) = forced_affine(f, g, df)? else {
        return Ok(None);
    };
    let m = AffineMap { b: b.clone(), c: c.clone() };
    let diff = f - &affine_compose(g, &m);
    if diff.degree().unwrap_or(0) > 0 {
        return Ok(None);
    }
    let d = diff.coeff(0);
    if !d.is_integer() {
        return Ok(None);
    }
    Ok(Some(EquivWitness { b, c, d: d.to_integer() }))
}

/// Partitions `polys` into `~`-classes, as lists of input indices. Classes
/// appear in order of their first member.
pub fn partition_classes(polys: &[RatPoly]) -> Result<Vec<Vec<usize>>> {
    for f in polys {
        crate::polyq::validate_order_poly(f)?;
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    'outer: for (i, f) in polys.iter().enumerate() {
        for class in classes.iter_mut() {
            if decide_equiv(&polys[class[0]], f)?.is_some() {
                class.push(i);
                continue 'outer;
            }
        }
        classes.push(vec![i]);
    }
    Ok(classes)
}

/// `(B, C, D)` with `g(x) = f_j((x + C) / B) + D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassTriple {
    #[serde(serialize_with = "ser_int")]
    pub b: BigInt,
    #[serde(serialize_with = "ser_int")]
    pub c: BigInt,
    #[serde(serialize_with = "ser_int")]
    pub d: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalClassForm {
    pub g: RatPoly,
    pub members: Vec<RatPoly>,
    pub triples: Vec<ClassTriple>,
}

impl CanonicalClassForm {
    /// Re-checks `g(x) = f_j((x + C_j) / B_j) + D_j` for every member.
    pub fn verify(&self) -> bool {
        self.members.iter().zip(&self.triples).all(|(f, t)| {
            if !t.b.is_positive() {
                return false;
            }
            let inv_b = Rat::new(BigInt::one(), t.b.clone());
            let m = AffineMap { c: Rat::from_integer(t.c.clone()) * &inv_b, b: inv_b };
            affine_compose(f, &m) + RatPoly::constant(Rat::from_integer(t.d.clone())) == self.g
        })
    }
}

/// Builds `g` from the first member `f_1` of a class: writing
/// `f_1(x) = f_j((s_j x + t_j) / r_j) + u_j` and `K = lcm(s_j)`, the
/// representative is `g(x) = f_1(x / K)`.
pub fn canonical_form(class: &[RatPoly]) -> Result<CanonicalClassForm> {
    let f1 = class
        .first()
        .ok_or_else(|| Error::InvalidPolynomial("empty class".into()))?;
    let mut parts = Vec::with_capacity(class.len());
    for f in class {
        let w = decide_equiv(f1, f)?
            .ok_or_else(|| Error::NotEquivalent(format!("{f1} and {f}")))?;
        let r = w.b.denom().lcm(w.c.denom());
        let s = (&w.b * Rat::from_integer(r.clone())).to_integer();
        let t = (&w.c * Rat::from_integer(r.clone())).to_integer();
        parts.push((r, s, t, w.d));
    }
    let k = parts.iter().fold(BigInt::one(), |acc, p| acc.lcm(&p.1));
    let g = affine_compose(f1, &AffineMap { b: Rat::new(BigInt::one(), k.clone()), c: Rat::zero() });
    let triples = parts
        .into_iter()
        .map(|(r, s, t, u)| {
            let ks = &k / &s;
            ClassTriple { b: r * &ks, c: t * ks, d: u }
        })
        .collect();
    let form = CanonicalClassForm { g, members: class.to_vec(), triples };
    if !form.verify() {
        return Err(Error::NotEquivalent("canonical identities failed to verify".into()));
    }
    Ok(form)
}

/// Index of the member that is least under [`canonical_cmp`].
pub fn canonical_first(class: &[RatPoly]) -> usize {
    (0..class.len())
        .min_by(|&a, &b| canonical_cmp(&class[a], &class[b]).then(a.cmp(&b)))
        .unwrap_or(0)
}
