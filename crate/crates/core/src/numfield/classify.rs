//! Pisot / Salem classification of the distinguished root.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use super::roots::{certified_roots, RootEnclosure};
use super::sturm::refine_root;
use super::NumberField;
use crate::{Error, Result};

pub const DEFAULT_PRECISION_CAP: u32 = 8192;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BaseKind {
    Pisot,
    Salem,
    Neither,
}

/// Certified position of a conjugate relative to the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Magnitude {
    #[serde(rename = "<1")]
    Inside,
    #[serde(rename = "=1")]
    OnCircle,
    #[serde(rename = ">1")]
    Outside,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugateEvidence {
    pub enclosure: RootEnclosure,
    /// `None` only in the evidence of a `Neither` verdict, for conjugates
    /// that did not need to be resolved.
    pub magnitude: Option<Magnitude>,
    pub distinguished: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseClass {
    pub kind: BaseKind,
    pub precision_bits: u32,
    pub evidence: Vec<ConjugateEvidence>,
}

/// Index of the unique real enclosure meeting the refined root hint.
pub fn distinguished_index(field: &NumberField, encl: &[RootEnclosure]) -> Option<usize> {
    let (lo, hi) = field.root_hint();
    let bits = encl.first()?.bits;
    let (a, b) = refine_root(field.min_poly(), lo, hi, bits / 2 + 8);
    let scale = BigInt::from(1) << bits;
    // compare [re - r, re + r] / 2^bits with [a, b]
    let hits: Vec<usize> = encl
        .iter()
        .enumerate()
        .filter(|(_, e)| {
            e.real && {
                let left = crate::Rat::new(&e.re - &e.radius, scale.clone());
                let right = crate::Rat::new(&e.re + &e.radius, scale.clone());
                left <= b && right >= a
            }
        })
        .map(|(i, _)| i)
        .collect();
    (hits.len() == 1).then(|| hits[0])
}

pub fn is_self_reciprocal(coeffs: &[BigInt]) -> bool {
    coeffs.iter().eq(coeffs.iter().rev())
}

/// True when the image of disk `i` under `z -> 1/conj(z)` misses every other
/// disk. For a self-reciprocal polynomial that image contains a root, so
/// the root in disk `i` is then its own image and lies on the unit circle.
fn reciprocal_fixed(encl: &[RootEnclosure], i: usize) -> bool {
    let e = &encl[i];
    let p2 = 2 * e.bits as usize;
    let den = &e.re * &e.re + &e.im * &e.im - &e.radius * &e.radius;
    if !den.is_positive() {
        return false;
    }
    let cre = &e.re << p2;
    let cim = &e.im << p2;
    let rad = &e.radius << p2;
    encl.iter().enumerate().all(|(j, o)| {
        if j == i {
            return true;
        }
        let dr = &cre - &o.re * &den;
        let di = &cim - &o.im * &den;
        let s = &rad + &o.radius * &den;
        &dr * &dr + &di * &di > &s * &s
    })
}

enum Attempt {
    Done(BaseKind, Vec<Option<Magnitude>>),
    Refine,
}

fn attempt(coeffs: &[BigInt], encl: &[RootEnclosure], dist: usize) -> Attempt {
    let mags: Vec<Option<Magnitude>> = encl
        .iter()
        .enumerate()
        .map(|(i, e)| {
            if i == dist {
                // the hint is certified to lie right of 1
                return Some(Magnitude::Outside);
            }
            match e.cmp_unit_circle() {
                Some(Ordering::Less) => Some(Magnitude::Inside),
                Some(Ordering::Greater) => Some(Magnitude::Outside),
                _ => None,
            }
        })
        .collect();
    let others = || mags.iter().enumerate().filter(|(i, _)| *i != dist).map(|(_, m)| *m);
    if others().all(|m| m == Some(Magnitude::Inside)) {
        return Attempt::Done(BaseKind::Pisot, mags);
    }
    if others().any(|m| m == Some(Magnitude::Outside)) {
        return Attempt::Done(BaseKind::Neither, mags);
    }
    if is_self_reciprocal(coeffs) {
        let mut salem = mags.clone();
        let mut resolved = true;
        for (i, m) in salem.iter_mut().enumerate() {
            if m.is_none() {
                if reciprocal_fixed(encl, i) {
                    *m = Some(Magnitude::OnCircle);
                } else {
                    resolved = false;
                }
            }
        }
        if resolved {
            return Attempt::Done(BaseKind::Salem, salem);
        }
    }
    Attempt::Refine
}

/// Classifies the distinguished root, doubling the working precision from
/// 128 bits up to `cap`.
pub fn classify_base_with_cap(field: &NumberField, cap: u32) -> Result<BaseClass> {
    let coeffs = field.int_coeffs();
    let mut prec = 128u32;
    while prec <= cap {
        let encl = certified_roots(coeffs, prec)?;
        if let Some(dist) = distinguished_index(field, &encl) {
            if let Attempt::Done(kind, mags) = attempt(coeffs, &encl, dist) {
                let evidence = encl
                    .into_iter()
                    .zip(mags)
                    .enumerate()
                    .map(|(i, (enclosure, magnitude))| ConjugateEvidence {
                        enclosure,
                        magnitude,
                        distinguished: i == dist,
                    })
                    .collect();
                return Ok(BaseClass { kind, precision_bits: prec, evidence });
            }
        }
        prec *= 2;
    }
    Err(Error::Undecided { cap })
}

pub fn classify_base(field: &NumberField) -> Result<BaseClass> {
    classify_base_with_cap(field, DEFAULT_PRECISION_CAP)
}
