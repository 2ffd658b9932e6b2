//! Arithmetic in `Q(q)`, algebraic-integer tests, certified embeddings and
//! Pisot/Salem classification of the base.

mod charpoly;
mod classify;
mod field;
mod irreducible;
mod roots;
mod sturm;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use charpoly::{char_poly, multiplication_matrix};
pub use classify::{
    classify_base, classify_base_with_cap, distinguished_index, is_self_reciprocal, BaseClass,
    BaseKind, ConjugateEvidence, Magnitude, DEFAULT_PRECISION_CAP,
};
pub use field::{FieldElem, NumberField};
pub use irreducible::{irreducibility, Irreducibility, MAX_DEGREE};
pub use roots::{certified_roots, RootEnclosure};
pub(crate) use roots::scaled_f64;
pub use sturm::{refine_root, SturmChain};

use crate::polyq::{parse_poly, poly_to_strings};
use crate::scalar::parse_rat;
use crate::{Error, Rat, RatPoly, Result};

/// Validates `min_poly` and the isolating interval and builds `Q(q)`.
pub fn field_new(min_poly: RatPoly, root_hint: (Rat, Rat)) -> Result<NumberField> {
    let d = min_poly
        .degree()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::InvalidField("degree must be at least 1".into()))?;
    if !min_poly.lead().unwrap().is_one() {
        return Err(Error::InvalidField(format!("{min_poly} is not monic")));
    }
    if min_poly.coeffs().iter().any(|c| !c.is_integer()) {
        return Err(Error::InvalidField(format!("{min_poly} has non-integer coefficients")));
    }
    if d > MAX_DEGREE {
        return Err(Error::InvalidField(format!("degree {d} exceeds the cap of {MAX_DEGREE}")));
    }
    let coeffs: Vec<_> = min_poly.coeffs().iter().map(|c| c.to_integer()).collect();
    if let Irreducibility::Factor(f) = irreducibility(&coeffs)? {
        let f = RatPoly::new(f.into_iter().map(Rat::from_integer).collect());
        return Err(Error::Reducible(f.to_string()));
    }
    let (lo, hi) = root_hint;
    if lo >= hi {
        return Err(Error::RootHint(format!("empty interval [{lo}, {hi}]")));
    }
    let sturm = SturmChain::new(&min_poly);
    let n = sturm.count_roots(&lo, &hi) + usize::from(min_poly.eval(&lo).is_zero());
    if n != 1 {
        return Err(Error::RootHint(format!("[{lo}, {hi}] contains {n} roots, expected exactly 1")));
    }
    let one = Rat::one();
    let lo = if lo < one { one } else { lo };
    if lo >= hi || sturm.count_roots(&lo, &hi) != 1 {
        return Err(Error::RootHint("the isolated root is not greater than 1".into()));
    }
    Ok(NumberField::from_parts(min_poly, (lo, hi)))
}

/// Whether the characteristic polynomial of multiplication by `a` is integral.
pub fn is_algebraic_integer(a: &FieldElem) -> bool {
    match a.field() {
        None => a.to_rat().is_some_and(|r| r.is_integer()),
        Some(k) => char_poly(&multiplication_matrix(a, k)).coeffs().iter().all(|c| c.is_integer()),
    }
}

/// Certified enclosures of all conjugates of `q`, each of radius at most
/// `2^-(precision_bits/2)`.
pub fn embeddings(field: &NumberField, precision_bits: u32) -> Result<Vec<RootEnclosure>> {
    if precision_bits < 64 {
        return Err(Error::PrecisionTooLow(format!("embeddings need >= 64 bits, got {precision_bits}")));
    }
    certified_roots(field.int_coeffs(), precision_bits)
}

/// JSON form `{"min_poly": [...], "root_hint": [lo, hi]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub min_poly: Vec<String>,
    pub root_hint: [String; 2],
}

impl FieldSpec {
    pub fn build(&self) -> Result<NumberField> {
        let p = parse_poly(&self.min_poly)?;
        field_new(p, (parse_rat(&self.root_hint[0])?, parse_rat(&self.root_hint[1])?))
    }

    pub fn of(field: &NumberField) -> Self {
        let (lo, hi) = field.root_hint();
        FieldSpec { min_poly: poly_to_strings(field.min_poly()), root_hint: [lo.to_string(), hi.to_string()] }
    }
}

/// Serializes an element as its coordinate strings, lowest power first.
pub fn elem_to_strings(a: &FieldElem) -> Vec<String> {
    a.raw_coords().iter().map(|c| c.to_string()).collect()
}

pub fn parse_elem(field: &NumberField, coords: &[String]) -> Result<FieldElem> {
    let cs = coords.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>()?;
    Ok(field.elem(cs))
}

/// Field of `q = n` for an integer `n >= 2`.
pub fn integer_base(n: i64) -> Result<NumberField> {
    if n < 2 {
        return Err(Error::InvalidField(format!("integer base must be >= 2, got {n}")));
    }
    let r = Rat::from_integer(n.into());
    let half = Rat::new(1.into(), 2.into());
    field_new(RatPoly::new(vec![-r.clone(), Rat::one()]), (&r - &half, &r + &half))
}
