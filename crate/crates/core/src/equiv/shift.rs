//! Solution sets of the shift condition `f_i(x + A) = f_j(B x + C) + D`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::forced_affine;
use crate::polyq::{integer_roots, validate_order_poly};
use crate::{Error, Poly, Rat, RatPoly, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ShiftKind {
    Empty,
    Finite,
    Progressions,
    All,
}

/// A set of integers: a finite list, or a union of residue classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftSolutionSet {
    pub kind: ShiftKind,
    #[serde(rename = "finite")]
    pub finite_shifts: Vec<i64>,
    pub modulus: u64,
    pub residues: Vec<u64>,
}

impl ShiftSolutionSet {
    pub fn empty() -> Self {
        ShiftSolutionSet { kind: ShiftKind::Empty, finite_shifts: vec![], modulus: 1, residues: vec![] }
    }

    pub fn all() -> Self {
        ShiftSolutionSet { kind: ShiftKind::All, finite_shifts: vec![], modulus: 1, residues: vec![0] }
    }

    pub fn finite(mut shifts: Vec<i64>) -> Self {
        shifts.sort_unstable();
        shifts.dedup();
        if shifts.is_empty() {
            return Self::empty();
        }
        ShiftSolutionSet { kind: ShiftKind::Finite, finite_shifts: shifts, modulus: 1, residues: vec![] }
    }

    pub fn progression(modulus: u64, residue: u64) -> Self {
        if modulus == 1 {
            return Self::all();
        }
        ShiftSolutionSet {
            kind: ShiftKind::Progressions,
            finite_shifts: vec![],
            modulus,
            residues: vec![residue % modulus],
        }
    }

    pub fn contains(&self, a: i64) -> bool {
        match self.kind {
            ShiftKind::Empty => false,
            ShiftKind::All => true,
            ShiftKind::Finite => self.finite_shifts.binary_search(&a).is_ok(),
            ShiftKind::Progressions => {
                let r = a.rem_euclid(self.modulus as i64) as u64;
                self.residues.contains(&r)
            }
        }
    }
}

/// `(B, C, D)` realizing `f_i(x + A) = f_j(B x + C) + D` for a given `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftWitness {
    #[serde(serialize_with = "super::ser_rat")]
    pub b: Rat,
    #[serde(serialize_with = "super::ser_int")]
    pub c: BigInt,
    #[serde(serialize_with = "super::ser_int")]
    pub d: BigInt,
}

/// `B` and `delta` with `C(A) = B A + delta`, or `None` when no `B` exists.
fn forced_line(fi: &RatPoly, fj: &RatPoly) -> Result<Option<(Rat, Rat, usize)>> {
    let d = fi.degree().unwrap();
    if fj.degree() != Some(d) {
        return Ok(None);
    }
    // forced_affine at A = 0 gives C(0) = delta; C is affine in A with slope B.
    Ok(forced_affine(fi, fj, d)?.map(|(b, delta)| (b, delta, d)))
}

/// `Phi(x, A) = f_i(x + A) - f_j(B x + B A + delta)` as a polynomial in `x`
/// with coefficients in `Q[A]`.
fn phi(fi: &RatPoly, fj: &RatPoly, b: &Rat, delta: &Rat) -> Poly<RatPoly> {
    let lift = |f: &RatPoly| -> Poly<RatPoly> { Poly::new(f.coeffs().iter().map(|c| RatPoly::constant(c.clone())).collect()) };
    let a = RatPoly::x();
    let left = lift(fi).compose_affine(&RatPoly::one(), &a);
    let c_of_a = RatPoly::new(vec![delta.clone(), b.clone()]);
    let right = lift(fj).compose_affine(&RatPoly::constant(b.clone()), &c_of_a);
    left - right
}

fn check_inputs(fi: &RatPoly, fj: &RatPoly) -> Result<()> {
    validate_order_poly(fi)?;
    validate_order_poly(fj)
}

/// Integers `A` with `B A + delta` integral, as a residue class.
fn congruence_set(b: &Rat, delta: &Rat) -> ShiftSolutionSet {
    let (p, q) = (b.numer(), b.denom());
    let s = delta.denom();
    if !(q % s).is_zero() {
        return ShiftSolutionSet::empty();
    }
    // p A + r (q / s) = 0 (mod q)
    let rhs = -(delta.numer() * (q / s));
    let inv = modinv(&p.mod_floor(q), q);
    let a = (rhs * inv).mod_floor(q);
    match (q.to_u64(), a.to_u64()) {
        (Some(m), Some(r)) => ShiftSolutionSet::progression(m, r),
        _ => ShiftSolutionSet::empty(),
    }
}

fn modinv(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// The set of integer shifts `A` for which some `B > 0` rational and
/// integers `C`, `D` give `f_i(x + A) = f_j(B x + C) + D`.
pub fn shift_solutions(fi: &RatPoly, fj: &RatPoly) -> Result<ShiftSolutionSet> {
    check_inputs(fi, fj)?;
    let Some((b, delta, d)) = forced_line(fi, fj)? else {
        return Ok(ShiftSolutionSet::empty());
    };
    let phi = phi(fi, fj, &b, &delta);
    debug_assert!(phi.coeff(d).is_zero() && phi.coeff(d - 1).is_zero());
    let mut obstruction = RatPoly::zero();
    for k in 1..d.saturating_sub(1) {
        obstruction = obstruction.gcd(&phi.coeff(k));
    }
    if obstruction.is_zero() {
        return Ok(congruence_set(&b, &delta));
    }
    if obstruction.degree() == Some(0) {
        return Ok(ShiftSolutionSet::empty());
    }
    let c_set = congruence_set(&b, &delta);
    let roots = integer_roots(&obstruction)?;
    Ok(ShiftSolutionSet::finite(roots.into_iter().filter(|&a| c_set.contains(a)).collect()))
}

/// The `(B, C, D)` for a particular shift, or `None` if `A` is not a
/// solution.
pub fn shift_witness(fi: &RatPoly, fj: &RatPoly, a: i64) -> Result<Option<ShiftWitness>> {
    check_inputs(fi, fj)?;
    let Some((b, delta, _)) = forced_line(fi, fj)? else {
        return Ok(None);
    };
    let c = &b * Rat::from_integer(a.into()) + &delta;
    if !c.is_integer() {
        return Ok(None);
    }
    let left = fi.compose_affine(&Rat::one(), &Rat::from_integer(a.into()));
    let right = fj.compose_affine(&b, &c);
    let diff = left - right;
    if diff.degree().unwrap_or(0) > 0 {
        return Ok(None);
    }
    let dconst = diff.coeff(0);
    if !dconst.is_integer() {
        return Err(Error::Hypothesis(format!(
            "shift identity with non-integral constant {dconst}; inputs are not integer-valued"
        )));
    }
    Ok(Some(ShiftWitness { b, c: c.to_integer(), d: dconst.to_integer() }))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn shift_examples() {
        let x2 = p(&[0, 0, 1]);
        assert_eq!(shift_solutions(&x2, &p(&[1, 2, 1])).unwrap().kind, ShiftKind::All);
        let s = shift_solutions(&x2, &p(&[0, 0, 4])).unwrap();
        assert_eq!((s.kind, s.modulus, s.residues.clone()), (ShiftKind::Progressions, 2, vec![0]));
        assert!(!s.contains(1));
        assert_eq!(shift_solutions(&p(&[0, 1, 1]), &p(&[0, 0, 4])).unwrap().kind, ShiftKind::Empty);
        assert_eq!(shift_solutions(&x2, &p(&[0, 0, 0, 1])).unwrap().kind, ShiftKind::Empty);
    }

    #[test]
    fn witnesses_match_sets() {
        let x2 = p(&[0, 0, 1]);
        let h = p(&[0, 0, 4]);
        let w = shift_witness(&x2, &h, 2).unwrap().unwrap();
        assert_eq!((w.c.clone(), w.d.clone()), (BigInt::from(1), BigInt::zero()));
        assert!(shift_witness(&x2, &h, 1).unwrap().is_none());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(shift_solutions(&p(&[0, 1]), &p(&[0, 0, 1])).is_err());
        let half = RatPoly::new(vec![int(0), int(0), Rat::new(1.into(), 2.into())]);
        assert!(shift_solutions(&half, &p(&[0, 0, 1])).is_err());
    }

    #[test]
    fn cubic_progressions() {
        // x^3 vs (2x+1)^3: B = 1/2, C = (A - 1)/2
        let s = shift_solutions(&p(&[0, 0, 0, 1]), &p(&[1, 6, 12, 8])).unwrap();
        assert_eq!((s.kind, s.modulus, s.residues), (ShiftKind::Progressions, 2, vec![1]));
    }
}
