//! Rigorous irreducibility test through certified complex roots.
//!
//! A monic integer polynomial of degree `D` is reducible iff some set of
//! at most `D/2` of its roots, closed under complex conjugation, has an
//! integer elementary-symmetric vector. For each such set we bound the
//! coefficients of `prod (x - z)` by interval arithmetic on the certified
//! disks, discard sets whose bounds exclude every integer, and confirm the
//! survivors by exact trial division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::roots::{certified_roots, RootEnclosure};
use crate::{Error, Rat, RatPoly, Result};

pub const MAX_DEGREE: usize = 24;

/// Outcome of the factor search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// A proper monic integer factor, lowest degree first.
    Factor(Vec<BigInt>),
}

fn to_ratpoly(c: &[BigInt]) -> RatPoly {
    RatPoly::new(c.iter().map(|x| Rat::from_integer(x.clone())).collect())
}

fn exact_divides(factor: &[BigInt], coeffs: &[BigInt]) -> bool {
    let (_, r) = to_ratpoly(coeffs).div_rem(&to_ratpoly(factor));
    r.is_zero()
}

/// Groups roots into real singletons and conjugate pairs, or `None` if the
/// disks are too wide to pair conjugates unambiguously.
fn conjugate_groups(encl: &[RootEnclosure]) -> Option<Vec<Vec<usize>>> {
    let mut used = vec![false; encl.len()];
    let mut groups = Vec::new();
    for i in 0..encl.len() {
        if used[i] {
            continue;
        }
        if encl[i].real {
            used[i] = true;
            groups.push(vec![i]);
            continue;
        }
        let mirror = RootEnclosure { im: -&encl[i].im, ..encl[i].clone() };
        let partners: Vec<usize> = (0..encl.len())
            .filter(|&j| j != i && !encl[j].real && !mirror.disjoint(&encl[j]))
            .collect();
        if partners.len() != 1 || used[partners[0]] {
            return None;
        }
        used[i] = true;
        used[partners[0]] = true;
        groups.push(vec![i, partners[0]]);
    }
    Some(groups)
}

enum Probe {
    NotFactor,
    Candidate(Vec<BigInt>),
    Ambiguous,
}

/// Examines the candidate factor whose roots are `idx`.
fn probe(encl: &[RootEnclosure], idx: &[usize], m: &BigInt, r: &BigInt) -> Probe {
    let bits = encl[0].bits as usize;
    // S(x) = prod (x - Z_i), Gaussian-integer coefficients, s_j scaled by 2^(bits (k - j))
    let mut re = vec![BigInt::one()];
    let mut im = vec![BigInt::zero()];
    for &i in idx {
        let (zr, zi) = (&encl[i].re, &encl[i].im);
        let mut nre = vec![BigInt::zero(); re.len() + 1];
        let mut nim = vec![BigInt::zero(); re.len() + 1];
        for j in 0..re.len() {
            nre[j + 1] += &re[j];
            nim[j + 1] += &im[j];
            nre[j] -= &re[j] * zr - &im[j] * zi;
            nim[j] -= &re[j] * zi + &im[j] * zr;
        }
        re = nre;
        im = nim;
    }
    let k = idx.len();
    // G = prod (x + M + R) - prod (x + M)
    let up = binomial_expand(&(m + r), k);
    let lo = binomial_expand(m, k);
    let mut out = Vec::with_capacity(k + 1);
    for j in 0..k {
        let g = &up[j] - &lo[j];
        if im[j].abs() > g {
            return Probe::NotFactor;
        }
        let scale = BigInt::one() << (bits * (k - j));
        let lo_n = (&re[j] - &g).div_ceil(&scale);
        let hi_n = (&re[j] + &g).div_floor(&scale);
        if lo_n > hi_n {
            return Probe::NotFactor;
        }
        if lo_n != hi_n {
            return Probe::Ambiguous;
        }
        out.push(lo_n);
    }
    out.push(BigInt::one());
    Probe::Candidate(out)
}

/// Coefficients of `(x + a)^k`, lowest first.
fn binomial_expand(a: &BigInt, k: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::one()];
    for _ in 0..k {
        let mut n = vec![BigInt::zero(); c.len() + 1];
        for j in 0..c.len() {
            n[j + 1] += &c[j];
            n[j] += &c[j] * a;
        }
        c = n;
    }
    c
}

fn search(
    groups: &[Vec<usize>],
    start: usize,
    chosen: &mut Vec<usize>,
    half: usize,
    ctx: &mut SearchCtx<'_>,
) -> Option<Vec<BigInt>> {
    for g in start..groups.len() {
        if chosen.len() + groups[g].len() > half {
            continue;
        }
        chosen.extend(&groups[g]);
        match probe(ctx.encl, chosen, &ctx.m, &ctx.r) {
            Probe::Candidate(f) if exact_divides(&f, ctx.coeffs) => return Some(f),
            Probe::Ambiguous => ctx.ambiguous = true,
            _ => {}
        }
        if let Some(f) = search(groups, g + 1, chosen, half, ctx) {
            return Some(f);
        }
        chosen.truncate(chosen.len() - groups[g].len());
    }
    None
}

struct SearchCtx<'a> {
    encl: &'a [RootEnclosure],
    coeffs: &'a [BigInt],
    m: BigInt,
    r: BigInt,
    ambiguous: bool,
}

/// Decides irreducibility over `Q` of a monic integer polynomial.
pub fn irreducibility(coeffs: &[BigInt]) -> Result<Irreducibility> {
    let d = coeffs.len().saturating_sub(1);
    if d > MAX_DEGREE {
        return Err(Error::InvalidField(format!("degree {d} exceeds the cap of {MAX_DEGREE}")));
    }
    if d <= 1 {
        return Ok(Irreducibility::Irreducible);
    }
    let p = to_ratpoly(coeffs);
    let g = p.gcd(&p.derivative());
    if g.degree().unwrap_or(0) > 0 {
        // the monic gcd of monic integer polynomials has integer coefficients
        let f = g.coeffs().iter().map(|c| c.to_integer()).collect();
        return Ok(Irreducibility::Factor(f));
    }
    let mut prec = 128u32;
    while prec <= 8192 {
        let encl = certified_roots(coeffs, 2 * prec)?;
        if let Some(groups) = conjugate_groups(&encl) {
            let r = encl.iter().map(|e| e.radius.clone()).max().unwrap();
            let m = encl
                .iter()
                .map(|e| (&e.re * &e.re + &e.im * &e.im).sqrt() + 1u32)
                .max()
                .unwrap();
            let mut ctx = SearchCtx { encl: &encl, coeffs, m, r, ambiguous: false };
            if let Some(f) = search(&groups, 0, &mut Vec::new(), d / 2, &mut ctx) {
                return Ok(Irreducibility::Factor(f));
            }
            if !ctx.ambiguous {
                return Ok(Irreducibility::Irreducible);
            }
        }
        prec *= 2;
    }
    Err(Error::PrecisionExhausted("irreducibility test did not resolve".into()))
}
