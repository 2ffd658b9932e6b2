//! Interleaved numerator sequences and their per-class linear systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::spec::SeriesSpec;
use crate::equiv::{ser_int, CanonicalClassForm};
use crate::linalg::echelon;
use crate::numfield::{elem_to_strings, FieldElem, NumberField};
use crate::{Error, FieldPoly, Rat, Result};

/// `p(n) = P((n + C) / B)` when `n = -C (mod B)`, zero otherwise; `D` is
/// the exponent shift in `g(x) = f((x + C) / B) + D`.
#[derive(Clone, Debug, PartialEq)]
pub struct InterleavedSeq {
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    pub p: FieldPoly,
}

impl InterleavedSeq {
    /// Residue class mod `B` where the sequence is supported.
    pub fn support(&self) -> BigInt {
        (-&self.c).mod_floor(&self.b)
    }

    fn active_at(&self, n: &BigInt) -> bool {
        (n + &self.c).is_multiple_of(&self.b)
    }

    pub fn at(&self, n: i64) -> FieldElem {
        let n = BigInt::from(n);
        if !self.active_at(&n) {
            return FieldElem::zero();
        }
        let m = (n + &self.c) / &self.b;
        self.p.eval(&FieldElem::rational(Rat::from_integer(m)))
    }

    /// `p(K n + r)` as a polynomial in `n`; `None` off the support.
    pub fn along(&self, k: &BigInt, r: &BigInt) -> Option<FieldPoly> {
        if !self.active_at(r) {
            return None;
        }
        let scale = FieldElem::rational(Rat::new(k.clone(), self.b.clone()));
        let shift = FieldElem::rational(Rat::new(r + &self.c, self.b.clone()));
        Some(self.p.compose_affine(&scale, &shift))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterleavedJson {
    #[serde(rename = "B", serialize_with = "ser_int")]
    pub b: BigInt,
    #[serde(rename = "C", serialize_with = "ser_int")]
    pub c: BigInt,
    #[serde(rename = "D", serialize_with = "ser_int")]
    pub d: BigInt,
    #[serde(rename = "P")]
    pub p: Vec<Vec<String>>,
}

impl InterleavedJson {
    pub fn of(s: &InterleavedSeq) -> Self {
        InterleavedJson {
            b: s.b.clone(),
            c: s.c.clone(),
            d: s.d.clone(),
            p: s.p.coeffs().iter().map(|a| elem_to_strings(a)).collect(),
        }
    }
}

/// Packages each member's numerator along the canonical variable of the
/// class. `members[j].f` must equal `form.members[j]`.
pub fn build_ptilde(form: &CanonicalClassForm, members: &[SeriesSpec]) -> Result<Vec<InterleavedSeq>> {
    if members.len() != form.members.len() {
        return Err(Error::NotEquivalent(format!(
            "class has {} members, got {} series",
            form.members.len(),
            members.len()
        )));
    }
    members
        .iter()
        .zip(form.members.iter().zip(&form.triples))
        .map(|(s, (f, t))| {
            if &s.f != f {
                return Err(Error::NotEquivalent(format!("order polynomial {} is not the class member {f}", s.f)));
            }
            Ok(InterleavedSeq { b: t.b.clone(), c: t.c.clone(), d: t.d.clone(), p: s.p.clone() })
        })
        .collect()
}

/// One unknown of a class system: `sum_parts weight * p_part(n)`.
#[derive(Clone, Debug)]
pub(crate) struct Column {
    pub parts: Vec<(FieldElem, InterleavedSeq)>,
}

/// `lcm` of the moduli over all parts.
pub(crate) fn class_modulus(cols: &[Column]) -> BigInt {
    cols.iter()
        .flat_map(|c| c.parts.iter())
        .fold(BigInt::one(), |acc, (_, s)| acc.lcm(&s.b))
}

/// Rows of the homogeneous system: one per residue `r mod K` and power of
/// `n` in `sum_j k_j column_j(K n + r)`.
pub(crate) fn class_rows(cols: &[Column]) -> Result<Vec<Vec<FieldElem>>> {
    let k = class_modulus(cols);
    let kk = k
        .to_u64()
        .filter(|&v| v <= 1 << 20)
        .ok_or_else(|| Error::Hypothesis(format!("class modulus {k} is too large")))?;
    let mut rows = Vec::new();
    for r in 0..kk {
        let r = BigInt::from(r);
        let polys: Vec<FieldPoly> = cols
            .iter()
            .map(|col| {
                col.parts.iter().fold(FieldPoly::zero(), |acc, (w, s)| match s.along(&k, &r) {
                    Some(p) => &acc + &p.scale(w),
                    None => acc,
                })
            })
            .collect();
        let top = polys.iter().filter_map(|p| p.degree()).max();
        let Some(top) = top else { continue };
        for e in 0..=top {
            let row: Vec<FieldElem> = polys.iter().map(|p| p.coeff(e)).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

/// Nullspace basis, each vector scaled so its first nonzero entry is one.
pub(crate) fn columns_nullspace(cols: &[Column]) -> Result<Vec<Vec<FieldElem>>> {
    let rows = class_rows(cols)?;
    let ech = echelon(rows, cols.len());
    ech.nullspace()
        .into_iter()
        .map(|v| {
            let lead = v.iter().find(|x| !x.is_zero()).cloned().ok_or(Error::DivisionByZero)?;
            v.iter().map(|x| x.checked_div(&lead)).collect()
        })
        .collect()
}

/// Basis of `{k : sum_j k_j p_j(n) = 0 for all n >= 0}` over the field.
pub fn class_nullspace(seqs: &[InterleavedSeq], _field: &NumberField) -> Result<Vec<Vec<FieldElem>>> {
    if seqs.is_empty() {
        return Err(Error::Hypothesis("class_nullspace needs at least one sequence".into()));
    }
    let cols: Vec<Column> = seqs
        .iter()
        .map(|s| {
            if !s.b.is_positive() {
                return Err(Error::Hypothesis(format!("modulus {} is not positive", s.b)));
            }
            Ok(Column { parts: vec![(FieldElem::one(), s.clone())] })
        })
        .collect::<Result<_>>()?;
    columns_nullspace(&cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::canonical_form;
    use crate::numfield::integer_base;
    use crate::scalar::int;
    use crate::serieval::lift_poly;
    use crate::RatPoly;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::new(c.iter().map(|&x| int(x)).collect())
    }

    fn exm5() -> (CanonicalClassForm, Vec<SeriesSpec>) {
        let fs = vec![p(&[0, 0, 1]), p(&[1, -4, 4]), p(&[0, 0, 4])];
        let ps = [p(&[0, 1]), p(&[-1, 2]), p(&[0, 2])];
        let series = fs.iter().zip(&ps).map(|(f, q)| SeriesSpec::rational(f.clone(), q)).collect();
        (canonical_form(&fs).unwrap(), series)
    }

    #[test]
    fn exm5_ptilde() {
        let (form, series) = exm5();
        let seqs = build_ptilde(&form, &series).unwrap();
        let bcd: Vec<(i64, i64, i64)> = seqs
            .iter()
            .map(|s| (s.b.to_i64().unwrap(), s.c.to_i64().unwrap(), s.d.to_i64().unwrap()))
            .collect();
        assert_eq!(bcd, vec![(1, 0, 0), (2, 1, 0), (2, 0, 0)]);
        // odd n carry P2((n+1)/2) = n, even n carry P3(n/2) = n
        for n in 0..12 {
            let want = FieldElem::rational(int(n));
            assert_eq!(seqs[0].at(n), want);
            let odd = if n % 2 == 1 { want.clone() } else { FieldElem::zero() };
            let even = if n % 2 == 0 { want } else { FieldElem::zero() };
            assert_eq!(seqs[1].at(n), odd);
            assert_eq!(seqs[2].at(n), even);
        }
    }

    #[test]
    fn exm5_nullspace() {
        let (form, series) = exm5();
        let seqs = build_ptilde(&form, &series).unwrap();
        let ns = class_nullspace(&seqs, &integer_base(2).unwrap()).unwrap();
        let one = FieldElem::one();
        assert_eq!(ns, vec![vec![one.clone(), -one.clone(), -one]]);
    }

    #[test]
    fn trivial_cases() {
        let k = integer_base(2).unwrap();
        let s = InterleavedSeq { b: 1.into(), c: 0.into(), d: 0.into(), p: lift_poly(&p(&[3, 1])) };
        assert!(class_nullspace(&[s.clone()], &k).unwrap().is_empty());
        let t = InterleavedSeq { p: lift_poly(&p(&[1])), ..s.clone() };
        assert!(class_nullspace(&[s, t], &k).unwrap().is_empty());
    }

    #[test]
    fn mismatch_rejected() {
        let (form, mut series) = exm5();
        series[1].f = p(&[0, 0, 9]);
        assert!(build_ptilde(&form, &series).is_err());
    }
}
