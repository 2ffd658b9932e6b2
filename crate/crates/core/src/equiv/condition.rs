//! Theorem 1 condition (i): some member admits a shift `A` that is not a
//! solution against any other member.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use super::shift::{shift_solutions, ShiftKind, ShiftSolutionSet};
use crate::polyq::{floor_rat, is_integer_valued, validate_order_poly};
use crate::{Error, Rat, RatPoly, Result};

pub const SUBSET_CAP: usize = 20;

/// The bad-shift set of the chosen member against one other member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCheck {
    pub j: usize,
    pub bad_shifts: ShiftSolutionSet,
}

/// Member `index` with shift `shift` outside every bad-shift set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionICertificate {
    pub index: usize,
    pub shift: i64,
    pub against: Vec<PairCheck>,
}

/// Full record of a single-set check, including all bad-shift sets
/// examined when no certificate exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionIAnalysis {
    pub certificate: Option<ConditionICertificate>,
    /// `(i, j, bad shifts)` for every ordered pair examined.
    pub pairs: Vec<(usize, usize, ShiftSolutionSet)>,
}

/// Smallest `|A|` (ties toward positive) outside the union, if any.
fn first_outside(sets: &[&ShiftSolutionSet]) -> Option<i64> {
    if sets.iter().any(|s| s.kind == ShiftKind::All) {
        return None;
    }
    let mut modulus = BigInt::one();
    let mut exceptions = 0usize;
    for s in sets {
        match s.kind {
            ShiftKind::Progressions => modulus = modulus.lcm(&BigInt::from(s.modulus)),
            ShiftKind::Finite => exceptions += s.finite_shifts.len(),
            _ => {}
        }
    }
    // every window of (exceptions + 1) * M consecutive integers contains an
    // uncovered one unless the progressions alone cover Z
    let window = (modulus * BigInt::from(exceptions + 1)).to_i64().unwrap_or(i64::MAX / 4);
    let bound = window / 2 + 1;
    let candidates = std::iter::once(0).chain((1..=bound).flat_map(|k| [k, -k]));
    candidates.into_iter().find(|&a| !sets.iter().any(|s| s.contains(a)))
}

/// Candidate order: ascending degree, then input position.
fn candidate_order(polys: &[RatPoly], members: &[usize]) -> Vec<usize> {
    let mut order = members.to_vec();
    order.sort_by_key(|&i| (polys[i].degree(), i));
    order
}

struct PairCache<'a> {
    polys: &'a [RatPoly],
    sets: HashMap<(usize, usize), ShiftSolutionSet>,
}

impl<'a> PairCache<'a> {
    fn new(polys: &'a [RatPoly]) -> Result<Self> {
        for f in polys {
            validate_order_poly(f)?;
        }
        Ok(PairCache { polys, sets: HashMap::new() })
    }

    fn get(&mut self, i: usize, j: usize) -> Result<&ShiftSolutionSet> {
        if !self.sets.contains_key(&(i, j)) {
            let s = shift_solutions(&self.polys[i], &self.polys[j])?;
            self.sets.insert((i, j), s);
        }
        Ok(&self.sets[&(i, j)])
    }

    fn certify(&mut self, members: &[usize]) -> Result<Option<ConditionICertificate>> {
        for i in candidate_order(self.polys, members) {
            let others: Vec<usize> = members.iter().copied().filter(|&j| j != i).collect();
            for &j in &others {
                self.get(i, j)?;
            }
            let sets: Vec<&ShiftSolutionSet> = others.iter().map(|&j| &self.sets[&(i, j)]).collect();
            if let Some(a) = first_outside(&sets) {
                let against = others
                    .iter()
                    .map(|&j| PairCheck { j, bad_shifts: self.sets[&(i, j)].clone() })
                    .collect();
                return Ok(Some(ConditionICertificate { index: i, shift: a, against }));
            }
        }
        Ok(None)
    }
}

/// Single-set check with the pairwise sets echoed back.
pub fn condition_i_analysis(polys: &[RatPoly]) -> Result<ConditionIAnalysis> {
    let mut cache = PairCache::new(polys)?;
    let members: Vec<usize> = (0..polys.len()).collect();
    let certificate = cache.certify(&members)?;
    let mut pairs: Vec<_> = cache.sets.into_iter().map(|((i, j), s)| (i, j, s)).collect();
    pairs.sort_by_key(|p| (p.0, p.1));
    Ok(ConditionIAnalysis { certificate, pairs })
}

/// Searches for `(i, A)` with `A` outside every bad-shift set of `f_i`.
pub fn check_condition_i(polys: &[RatPoly]) -> Result<Option<ConditionICertificate>> {
    Ok(condition_i_analysis(polys)?.certificate)
}

/// Re-checks a certificate against freshly computed bad-shift sets.
pub fn verify_certificate(polys: &[RatPoly], cert: &ConditionICertificate) -> Result<bool> {
    let Some(fi) = polys.get(cert.index) else {
        return Ok(false);
    };
    for (j, fj) in polys.iter().enumerate() {
        if j != cert.index && super::shift_witness(fi, fj, cert.shift)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of the all-subsets sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetSweep {
    pub subsets_checked: usize,
    /// The first subset (in bitmask order) without a certificate.
    pub failing_subset: Option<Vec<usize>>,
}

/// Checks condition (i) for every nonempty subset, in order of the bitmask
/// whose bit `k` selects member `k`.
pub fn check_condition_i_all_subsets(polys: &[RatPoly]) -> Result<SubsetSweep> {
    if polys.len() > SUBSET_CAP {
        return Err(Error::SubsetCap { size: polys.len(), cap: SUBSET_CAP });
    }
    let mut cache = PairCache::new(polys)?;
    let n = polys.len();
    let mut checked = 0;
    for mask in 1u32..(1u32 << n) {
        let members: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
        checked += 1;
        if cache.certify(&members)?.is_none() {
            return Ok(SubsetSweep { subsets_checked: checked, failing_subset: Some(members) });
        }
    }
    Ok(SubsetSweep { subsets_checked: checked, failing_subset: None })
}

/// One member `i g(x)^j + h(x)` of a Lemma 2 family.
#[derive(Clone, Debug, PartialEq)]
pub struct Lemma2Member {
    pub i: u64,
    pub j: u32,
    pub h: RatPoly,
}

impl Lemma2Member {
    pub fn poly(&self, g: &RatPoly) -> RatPoly {
        g.pow(self.j).scale(&Rat::from_integer(self.i.into())) + self.h.clone()
    }
}

/// `A_0 = -floor(u / (t d)) - 1` for `g = t x^d + u x^(d-1) + ...`, after
/// checking that every minimal-`i` member excludes it against the rest.
pub fn lemma2_witness(g: &RatPoly, family: &[Lemma2Member]) -> Result<i64> {
    let d = g
        .degree()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::Hypothesis(format!("g must have degree >= 1, got {g}")))?;
    let t = g.lead().unwrap().clone();
    if !t.is_positive() || !is_integer_valued(g) {
        return Err(Error::Hypothesis(format!("g must be integer-valued with positive lead, got {g}")));
    }
    let mut seen = Vec::new();
    for m in family {
        let dj = d * m.j as usize;
        if m.i == 0 || dj < 2 {
            return Err(Error::Hypothesis(format!("need i >= 1 and j >= 2/d, got (i, j) = ({}, {})", m.i, m.j)));
        }
        if m.h.degree().is_some_and(|dh| dh + 2 > dj) {
            return Err(Error::Hypothesis(format!("deg h_(i,j) must be <= {}, got {}", dj - 2, m.h)));
        }
        if !is_integer_valued(&m.h) {
            return Err(Error::Hypothesis(format!("h_(i,j) must be integer-valued, got {}", m.h)));
        }
        if seen.contains(&(m.i, m.j)) {
            return Err(Error::Hypothesis(format!("duplicate index ({}, {})", m.i, m.j)));
        }
        seen.push((m.i, m.j));
    }
    let u = g.coeff(d - 1);
    let td = t * Rat::from_integer(BigInt::from(d));
    let a0: BigInt = -floor_rat(&(u / td)) - 1;
    let a0 = a0
        .to_i64()
        .ok_or_else(|| Error::Hypothesis("A_0 out of range".into()))?;
    let polys: Vec<RatPoly> = family.iter().map(|m| m.poly(g)).collect();
    for (a, ma) in family.iter().enumerate() {
        for (b, mb) in family.iter().enumerate() {
            if a != b && mb.i >= ma.i && shift_solutions(&polys[a], &polys[b])?.contains(a0) {
                return Err(Error::Hypothesis(format!(
                    "A_0 = {a0} is a bad shift of member {a} against member {b}"
                )));
            }
        }
    }
    Ok(a0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use num_traits::Zero;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn condition_examples() {
        let trio = [p(&[0, 1, 1]), p(&[0, 0, 4]), p(&[1, -4, 4])];
        let c = check_condition_i(&trio).unwrap().unwrap();
        assert_eq!((c.index, c.shift), (0, 0));
        assert!(verify_certificate(&trio, &c).unwrap());
        assert!(check_condition_i(&[p(&[0, 0, 1]), p(&[1, 2, 1])]).unwrap().is_none());
        let c = check_condition_i(&[p(&[0, 0, 1])]).unwrap().unwrap();
        assert_eq!((c.index, c.shift), (0, 0));
    }

    #[test]
    fn progression_exclusion_picks_smallest() {
        // x^2 against (2x)^2: bad shifts are the even integers
        let c = check_condition_i(&[p(&[0, 0, 1]), p(&[0, 0, 4])]).unwrap().unwrap();
        assert_eq!((c.index, c.shift), (0, 1));
    }

    #[test]
    fn subset_sweep() {
        let trio = [p(&[0, 1, 1]), p(&[0, 0, 4]), p(&[1, -4, 4])];
        let sweep = check_condition_i_all_subsets(&trio).unwrap();
        assert_eq!(sweep.failing_subset, None);
        assert_eq!(sweep.subsets_checked, 7);
        let bad = [p(&[0, 0, 1]), p(&[0, 0, 0, 1]), p(&[1, 2, 1])];
        let sweep = check_condition_i_all_subsets(&bad).unwrap();
        assert_eq!(sweep.failing_subset, Some(vec![0, 2]));
        let many: Vec<RatPoly> = (0..21).map(|k| p(&[k, 0, 1])).collect();
        assert!(matches!(check_condition_i_all_subsets(&many), Err(Error::SubsetCap { .. })));
    }

    #[test]
    fn lemma2_examples() {
        let fam = |g: &RatPoly| {
            let d = g.degree().unwrap() as u32;
            let j0 = if d >= 2 { 1 } else { 2 };
            vec![
                Lemma2Member { i: 1, j: j0, h: RatPoly::zero() },
                Lemma2Member { i: 2, j: j0, h: p(&[3]) },
                Lemma2Member { i: 1, j: j0 + 1, h: p(&[0, 1]) },
            ]
        };
        let g = p(&[0, 1]);
        assert_eq!(lemma2_witness(&g, &fam(&g)).unwrap(), -1);
        let g = p(&[0, 1, 1]);
        assert_eq!(lemma2_witness(&g, &fam(&g)).unwrap(), -1);
        let g = p(&[0, 7, 3]);
        assert_eq!(lemma2_witness(&g, &fam(&g)).unwrap(), -2);
        let bad = vec![Lemma2Member { i: 1, j: 1, h: p(&[0, 0, 1]) }];
        assert!(lemma2_witness(&p(&[0, 1, 1]), &bad).is_err());
    }
}
