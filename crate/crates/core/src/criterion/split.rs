//! Reduction of periodically twisted series to untwisted ones.

use super::spec::SeriesSpec;
use crate::numfield::FieldElem;
use crate::scalar::int;
use num_traits::Zero;

/// One untwisted piece of a twisted series: the terms with
/// `n = period * m - (period - residue)`, `m >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub residue: usize,
    pub period: usize,
    pub spec: SeriesSpec,
}

/// Splits `s` along residues mod the twist period; the `r`-th branch has
/// order `f(p m - (p - r))` and numerator `chi(r) P(p m - (p - r))`.
/// Branches with `chi(r) = 0` are dropped. A trivial or constant twist
/// yields a single untwisted series.
pub fn split_twist_branches(s: &SeriesSpec) -> Vec<Branch> {
    let Some(t) = &s.twist else {
        return vec![Branch { residue: 1, period: 1, spec: s.clone() }];
    };
    if t.is_constant() {
        let c = t.values[0].clone();
        if c.is_zero() {
            return vec![];
        }
        let p = s.p.map(|a| a.clone() * c.clone());
        return vec![Branch { residue: 1, period: 1, spec: SeriesSpec::new(s.f.clone(), p) }];
    }
    let period = t.period();
    (1..=period)
        .filter_map(|r| {
            let chi = t.at(r as i64).clone();
            if chi.is_zero() {
                return None;
            }
            let b = int(period as i64);
            let c = int(r as i64 - period as i64);
            let f = s.f.compose_affine(&b, &c);
            let (fb, fc) = (FieldElem::rational(b), FieldElem::rational(c));
            let p = s.p.compose_affine(&fb, &fc).map(|a| a.clone() * chi.clone());
            Some(Branch { residue: r, period, spec: SeriesSpec::new(f, p) })
        })
        .collect()
}

/// The untwisted series whose sum is `s`, term for term.
pub fn split_twist(s: &SeriesSpec) -> Vec<SeriesSpec> {
    split_twist_branches(s).into_iter().map(|b| b.spec).collect()
}
