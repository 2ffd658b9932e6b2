//! The linear independence decision over `Q(q)` for lacunary series with
//! polynomial numerators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use super::interleave::{class_modulus, class_rows, columns_nullspace, Column, InterleavedJson, InterleavedSeq};
use super::spec::SeriesSpec;
use super::split::split_twist_branches;
use crate::equiv::{canonical_first, canonical_form, check_condition_i_all_subsets, partition_classes, SubsetSweep};
use crate::linalg::{echelon, mat_vec};
use crate::numfield::{elem_to_strings, is_algebraic_integer, FieldElem, NumberField};
use crate::polyq::{canonical_cmp, is_integer_valued, integer_roots};
use crate::serieval::{eval_field_elem, eval_series, RealBall};
use crate::{Error, Rat, RatPoly, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Theorem2,
    Corollary1,
    Corollary2,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem2" => Ok(Mode::Theorem2),
            "corollary1" => Ok(Mode::Corollary1),
            "corollary2" => Ok(Mode::Corollary2),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

/// `strict` enforces the algebraic-integer hypothesis on numerators
/// instead of clearing denominators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecideOptions {
    pub mode: Mode,
    pub strict: bool,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { mode: Mode::Theorem2, strict: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Independent,
    Dependent,
}

fn ser_elem<S: Serializer>(a: &FieldElem, s: S) -> std::result::Result<S::Ok, S::Error> {
    elem_to_strings(a).serialize(s)
}

fn ser_elems<S: Serializer>(v: &[FieldElem], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(elem_to_strings).collect::<Vec<_>>().serialize(s)
}

/// One twist branch of an input series, placed along the class variable.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchReport {
    pub series: usize,
    pub residue: usize,
    pub period: usize,
    #[serde(flatten)]
    pub seq: InterleavedJson,
}

/// The linear system of one `~`-class and its pivot structure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassReport {
    pub g: RatPoly,
    pub members: Vec<usize>,
    pub branches: Vec<BranchReport>,
    #[serde(serialize_with = "crate::equiv::ser_int")]
    pub modulus: BigInt,
    pub equations: usize,
    pub pivots: Vec<usize>,
    pub nullity: usize,
}

/// `sum_j coeffs[j] * series_j = constant`, with `coeffs` zero outside
/// the class that carries the dependence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Relation {
    pub class: usize,
    pub g: RatPoly,
    pub members: Vec<usize>,
    #[serde(serialize_with = "ser_elems")]
    pub coeffs: Vec<FieldElem>,
    #[serde(serialize_with = "ser_elem")]
    pub constant: FieldElem,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    TrivialNullspace { classes: Vec<ClassReport> },
    ConditionI { sweep: SubsetSweep },
    DistinctDegrees { degrees: Vec<usize> },
    Relation { relation: Relation, classes: Vec<ClassReport> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub mode: Mode,
    pub certificate: Certificate,
}

impl Verdict {
    pub fn relation(&self) -> Option<&Relation> {
        match &self.certificate {
            Certificate::Relation { relation, .. } => Some(relation),
            _ => None,
        }
    }
}

/// A branch with its parameters relative to the class representative.
#[derive(Clone, Debug)]
struct PlacedBranch {
    series: usize,
    residue: usize,
    period: usize,
    spec: SeriesSpec,
    seq: InterleavedSeq,
}

#[derive(Clone, Debug)]
struct ClassSystem {
    g: RatPoly,
    members: Vec<usize>,
    branches: Vec<PlacedBranch>,
}

impl ClassSystem {
    fn columns(&self, field: &NumberField) -> Result<Vec<Column>> {
        self.members
            .iter()
            .map(|&j| {
                let parts = self
                    .branches
                    .iter()
                    .filter(|b| b.series == j)
                    .map(|b| Ok((q_pow(field, &Rat::from_integer(b.seq.d.clone()))?, b.seq.clone())))
                    .collect::<Result<_>>()?;
                Ok(Column { parts })
            })
            .collect()
    }
}

fn q_pow(field: &NumberField, e: &Rat) -> Result<FieldElem> {
    let e = e
        .to_integer()
        .to_i64()
        .filter(|_| e.is_integer())
        .ok_or_else(|| Error::Hypothesis(format!("exponent {e} is not a machine integer")))?;
    field.gen().pow_i(e)
}

/// Groups the series into `~`-classes of their order polynomials and
/// places every twist branch along the canonical variable `g` of its
/// class, in canonical order of `g`.
fn class_systems(series: &[SeriesSpec]) -> Result<Vec<ClassSystem>> {
    let fs: Vec<RatPoly> = series.iter().map(|s| s.f.clone()).collect();
    let mut out = Vec::new();
    for class in partition_classes(&fs)? {
        let mut members = class.clone();
        let first = canonical_first(&members.iter().map(|&j| fs[j].clone()).collect::<Vec<_>>());
        members.rotate_left(first);
        let polys: Vec<RatPoly> = members.iter().map(|&j| fs[j].clone()).collect();
        let form = canonical_form(&polys)?;
        let mut branches = Vec::new();
        for (&j, t) in members.iter().zip(&form.triples) {
            for br in split_twist_branches(&series[j]) {
                // f_r(x) = f(p x - (p - r)) so g(x) = f_r((x + C') / B') + D
                // with B' = p B and C' = C + (p - r) B
                let p = BigInt::from(br.period);
                let lag = BigInt::from(br.period - br.residue);
                let seq = InterleavedSeq {
                    b: &p * &t.b,
                    c: &t.c + lag * &t.b,
                    d: t.d.clone(),
                    p: br.spec.p.clone(),
                };
                branches.push(PlacedBranch { series: j, residue: br.residue, period: br.period, spec: br.spec, seq });
            }
        }
        let mut sorted = members.clone();
        sorted.sort_unstable();
        out.push(ClassSystem { g: form.g, members: sorted, branches });
    }
    out.sort_by(|a, b| canonical_cmp(&a.g, &b.g).then(a.members.cmp(&b.members)));
    Ok(out)
}

fn class_report(sys: &ClassSystem, field: &NumberField) -> Result<(ClassReport, Vec<Vec<FieldElem>>)> {
    let cols = sys.columns(field)?;
    let rows = class_rows(&cols)?;
    let equations = rows.len();
    let ech = echelon(rows, cols.len());
    let ns = columns_nullspace(&cols)?;
    let report = ClassReport {
        g: sys.g.clone(),
        members: sys.members.clone(),
        branches: sys
            .branches
            .iter()
            .map(|b| BranchReport {
                series: b.series,
                residue: b.residue,
                period: b.period,
                seq: InterleavedJson::of(&b.seq),
            })
            .collect(),
        modulus: class_modulus(&cols),
        equations,
        pivots: ech.pivots.clone(),
        nullity: ns.len(),
    };
    Ok((report, ns))
}

/// `sum_{m>=1} P(m) q^-f(m)` minus the same sum over `m >= ceil(C / B)`;
/// the latter is the branch's share of `sum_{n>=0} q^D p(n) q^-g(n)`.
fn boundary_constant(b: &PlacedBranch, field: &NumberField) -> Result<FieldElem> {
    let m0 = b.seq.c.div_ceil(&b.seq.b);
    let term = |m: &BigInt| -> Result<FieldElem> {
        let x = Rat::from_integer(m.clone());
        let px = b.spec.p.eval(&FieldElem::rational(x.clone()));
        Ok(px * q_pow(field, &-b.spec.f.eval(&x))?)
    };
    let one = BigInt::one();
    let mut s = FieldElem::zero();
    if m0 > one {
        let mut m = one.clone();
        while m < m0 {
            s = s + term(&m)?;
            m += 1;
        }
    } else {
        let mut m = m0;
        while m <= BigInt::zero() {
            s = s - term(&m)?;
            m += 1;
        }
    }
    Ok(s)
}

fn relation_from(sys: &ClassSystem, class: usize, k: &[FieldElem], len: usize, field: &NumberField) -> Result<Relation> {
    let cols = sys.columns(field)?;
    let rows = class_rows(&cols)?;
    if k.len() != sys.members.len() || mat_vec(&rows, k).iter().any(|x| !x.is_zero()) {
        return Err(Error::NotInNullspace);
    }
    let mut coeffs = vec![FieldElem::zero(); len];
    let mut constant = FieldElem::zero();
    for (kj, &j) in k.iter().zip(&sys.members) {
        coeffs[j] = kj.clone();
        for b in sys.branches.iter().filter(|b| b.series == j) {
            constant = constant + kj.clone() * boundary_constant(b, field)?;
        }
    }
    Ok(Relation { class, g: sys.g.clone(), members: sys.members.clone(), coeffs, constant })
}

/// Turns a nullspace vector of `class` (indices into `series`) into the
/// relation `sum_j k_j series_j = constant` among the original numbers.
pub fn reconstruct_relation(
    series: &[SeriesSpec],
    class: &[usize],
    kvec: &[FieldElem],
    field: &NumberField,
) -> Result<Relation> {
    if class.iter().any(|&j| j >= series.len()) {
        return Err(Error::Hypothesis("class index out of range".into()));
    }
    let sub: Vec<SeriesSpec> = class.iter().map(|&j| series[j].clone()).collect();
    let systems = class_systems(&sub)?;
    let [sys] = systems.as_slice() else {
        return Err(Error::NotEquivalent("members do not form a single class".into()));
    };
    // `sys.members` indexes `sub`, which is `class` in order
    let mut relation = relation_from(sys, 0, kvec, sub.len(), field)?;
    relation.members = class.to_vec();
    let mut coeffs = vec![FieldElem::zero(); series.len()];
    for (k, &j) in relation.coeffs.iter().zip(class) {
        coeffs[j] = k.clone();
    }
    relation.coeffs = coeffs;
    Ok(relation)
}

fn check_integer_coefficients(series: &[SeriesSpec]) -> Result<()> {
    for (j, s) in series.iter().enumerate() {
        for br in split_twist_branches(s) {
            if let Some(c) = br.spec.p.coeffs().iter().find(|c| !is_algebraic_integer(c)) {
                return Err(Error::Hypothesis(format!(
                    "series {j}: numerator coefficient {c} is not an algebraic integer"
                )));
            }
        }
    }
    Ok(())
}

/// Corollary 1 needs `a(n) = chi(n) P(n)` to be a nonzero rational integer
/// for every `n >= 1`.
fn check_nonzero_integer_sequence(j: usize, s: &SeriesSpec) -> Result<()> {
    let fail = |why: String| Err(Error::Hypothesis(format!("series {j}: {why}")));
    let Some(p) = s.p.coeffs().iter().map(FieldElem::to_rat).collect::<Option<Vec<Rat>>>() else {
        return fail("numerator has irrational coefficients".into());
    };
    let p = RatPoly::new(p);
    if let Some(t) = &s.twist {
        for v in &t.values {
            match v.to_rat() {
                Some(r) if r.is_integer() && !r.is_zero() => {}
                _ => return fail(format!("twist value {v} is not a nonzero integer")),
            }
        }
    }
    if !is_integer_valued(&p) {
        return fail(format!("numerator {p} is not integer-valued"));
    }
    if let Some(n) = integer_roots(&p)?.into_iter().find(|&n| n >= 1) {
        return fail(format!("numerator vanishes at n = {n}"));
    }
    Ok(())
}

fn has_twist(s: &SeriesSpec) -> bool {
    s.twist.as_ref().is_some_and(|t| !t.values.iter().all(|v| v.is_one()))
}

/// Decides linear independence of `1, sum_n chi_j(n) P_j(n) / q^f_j(n)`
/// over `Q(q)` under the theorem selected by `mode`. The base is assumed
/// Pisot or Salem; classification is the caller's concern.
pub fn decide_independence(series: &[SeriesSpec], field: &NumberField, mode: Mode) -> Result<Verdict> {
    decide_independence_with(series, field, DecideOptions { mode, strict: false })
}

pub fn decide_independence_with(series: &[SeriesSpec], field: &NumberField, opts: DecideOptions) -> Result<Verdict> {
    if series.is_empty() {
        return Err(Error::Hypothesis("no series given".into()));
    }
    for (j, s) in series.iter().enumerate() {
        s.validate().map_err(|e| Error::Hypothesis(format!("series {j}: {e}")))?;
    }
    let mode = opts.mode;
    match mode {
        Mode::Corollary1 => {
            for (j, s) in series.iter().enumerate() {
                check_nonzero_integer_sequence(j, s)?;
            }
            let fs: Vec<RatPoly> = series.iter().map(|s| s.f.clone()).collect();
            let sweep = check_condition_i_all_subsets(&fs)?;
            if let Some(bad) = &sweep.failing_subset {
                let names: Vec<String> = bad.iter().map(usize::to_string).collect();
                return Err(Error::Hypothesis(format!("condition (i) fails for subset {{{}}}", names.join(", "))));
            }
            Ok(Verdict { status: Status::Independent, mode, certificate: Certificate::ConditionI { sweep } })
        }
        Mode::Corollary2 => {
            if let Some(j) = series.iter().position(has_twist) {
                return Err(Error::Hypothesis(format!("series {j}: corollary2 takes polynomial numerators without twist")));
            }
            if opts.strict {
                check_integer_coefficients(series)?;
            }
            let degrees: Vec<usize> = series.iter().map(|s| s.p.degree().unwrap_or(0)).collect();
            for a in 0..degrees.len() {
                for b in a + 1..degrees.len() {
                    if degrees[a] == degrees[b] {
                        return Err(Error::Hypothesis(format!(
                            "numerators of series {a} and {b} share degree {}",
                            degrees[a]
                        )));
                    }
                }
            }
            Ok(Verdict { status: Status::Independent, mode, certificate: Certificate::DistinctDegrees { degrees } })
        }
        Mode::Theorem2 => {
            if opts.strict {
                check_integer_coefficients(series)?;
            }
            let systems = class_systems(series)?;
            let mut reports = Vec::with_capacity(systems.len());
            let mut found = None;
            for (ci, sys) in systems.iter().enumerate() {
                let (report, ns) = class_report(sys, field)?;
                if found.is_none() {
                    if let Some(k) = ns.first() {
                        found = Some(relation_from(sys, ci, k, series.len(), field)?);
                    }
                }
                reports.push(report);
            }
            Ok(match found {
                Some(relation) => Verdict {
                    status: Status::Dependent,
                    mode,
                    certificate: Certificate::Relation { relation, classes: reports },
                },
                None => Verdict {
                    status: Status::Independent,
                    mode,
                    certificate: Certificate::TrivialNullspace { classes: reports },
                },
            })
        }
    }
}

/// Re-derives a relation from scratch: the coefficients must annihilate
/// every residue identity of their class and the constant must match the
/// boundary bookkeeping.
pub fn verify_relation(series: &[SeriesSpec], field: &NumberField, rel: &Relation) -> Result<bool> {
    if rel.coeffs.len() != series.len() {
        return Ok(false);
    }
    if rel.coeffs.iter().enumerate().any(|(j, c)| !c.is_zero() && !rel.members.contains(&j)) {
        return Ok(false);
    }
    let k: Vec<FieldElem> = rel.members.iter().map(|&j| rel.coeffs[j].clone()).collect();
    match reconstruct_relation(series, &rel.members, &k, field) {
        Ok(again) => Ok(again.constant == rel.constant && again.coeffs == rel.coeffs),
        Err(Error::NotInNullspace) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Enclosure of `sum_j coeffs[j] * series_j - constant`.
pub fn relation_residual_ball(series: &[SeriesSpec], field: &NumberField, rel: &Relation, prec: u32) -> Result<RealBall> {
    let w = prec + 16;
    let mut acc = eval_field_elem(&rel.constant, field, w)?.neg();
    for (s, k) in series.iter().zip(&rel.coeffs) {
        if k.is_zero() {
            continue;
        }
        let v = eval_series(s, field, w)?;
        acc = acc.add(&eval_field_elem(k, field, w)?.mul(&v));
    }
    Ok(acc)
}

/// Theorem 1 condition (ii): a progression `E n + A` along which the
/// coefficients stay away from zero.
pub fn certify_condition_ii(s: &SeriesSpec) -> Result<(u64, i64)> {
    if s.p.is_zero() {
        return Err(Error::Hypothesis("numerator polynomial is zero".into()));
    }
    match &s.twist {
        None => Ok((1, 0)),
        Some(t) => {
            let a = t
                .values
                .iter()
                .position(|v| !v.is_zero())
                .ok_or_else(|| Error::Hypothesis("twist is identically zero".into()))?;
            Ok((t.period() as u64, a as i64))
        }
    }
}
