//! Rigorous evaluation of `q`, field elements, lacunary series and theta
//! constants as [`RealBall`]s.

mod ball;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use ball::RealBall;

use crate::criterion::{SeriesSpec, Twist};
use crate::numfield::{refine_root, FieldElem, NumberField};
use crate::polyq::validate_order_poly;
use crate::scalar::int;
use crate::{Error, FieldPoly, Rat, RatPoly, Result};

const MAX_RETRIES: u32 = 8;

fn check_prec(prec: u32) -> Result<()> {
    if prec < 64 {
        return Err(Error::PrecisionTooLow(format!("evaluation needs >= 64 bits, got {prec}")));
    }
    Ok(())
}

/// Ball around `q` of radius at most `2^-prec`.
pub fn eval_base(field: &NumberField, prec: u32) -> Result<RealBall> {
    let scale = prec + 8;
    if field.degree() == 1 {
        let root = -field.min_poly().coeff(0);
        return Ok(RealBall::from_rat(&root, scale));
    }
    let (lo, hi) = field.root_hint();
    let (a, b) = refine_root(field.min_poly(), lo, hi, prec + 6);
    let two = int(2);
    let centre = (&a + &b) / &two;
    let half = (&b - &a) / &two;
    let c = RealBall::from_rat(&centre, scale);
    let r = (half * Rat::from_integer(BigInt::one() << scale)).ceil().to_integer();
    Ok(c.inflate(&r))
}

fn horner_at(a: &FieldElem, q: &RealBall) -> RealBall {
    let w = q.prec;
    let mut acc = RealBall::zero(w);
    for c in a.raw_coords().iter().rev() {
        acc = acc.mul(q).add(&RealBall::from_rat(c, w));
    }
    acc
}

/// Image of `a` under the real embedding `q -> q`, radius at most `2^-prec`.
pub fn eval_field_elem(a: &FieldElem, field: &NumberField, prec: u32) -> Result<RealBall> {
    if let Some(r) = a.to_rat() {
        return Ok(RealBall::from_rat(&r, prec + 2));
    }
    let mut extra = 16;
    for _ in 0..MAX_RETRIES {
        let q = eval_base(field, prec + extra)?;
        let v = horner_at(a, &q);
        if v.radius_at_most_pow2(prec as i64) {
            return Ok(v);
        }
        extra *= 2;
    }
    Err(Error::PrecisionExhausted(format!("could not evaluate {a} to {prec} bits")))
}

/// `1 + max |g_k / g_lead|`, an upper bound for every real root of `g`.
fn cauchy_bound(g: &RatPoly) -> Rat {
    let Some(d) = g.degree() else {
        return Rat::zero();
    };
    let lead = g.coeff(d).abs();
    let m = (0..d).map(|k| g.coeff(k).abs() / &lead).max().unwrap_or_else(Rat::zero);
    Rat::one() + m
}

fn forward_difference(f: &RatPoly) -> RatPoly {
    f.compose_affine(&Rat::one(), &Rat::one()) - f.clone()
}

/// A rational lower bound for `q` with a power-of-two denominator, still `> 1`.
fn q_lower_bound(field: &NumberField) -> Rat {
    if field.degree() == 1 {
        return -field.min_poly().coeff(0);
    }
    let (lo, hi) = field.root_hint();
    let mut k = 16;
    loop {
        let (a, _) = refine_root(field.min_poly(), lo, hi, k + 4);
        let den = BigInt::one() << k;
        let r = Rat::new((&a * Rat::from_integer(den.clone())).floor().to_integer(), den);
        if r > Rat::one() {
            return r;
        }
        k *= 2;
    }
}

/// Rational upper bound on `|a(n)|` as `chi_max * sum_k C_k n^k`.
struct TermBound {
    coeffs: Vec<Rat>,
}

impl TermBound {
    fn new(s: &SeriesSpec, field: &NumberField) -> Result<Self> {
        let ub = |e: &FieldElem| -> Result<Rat> { Ok(eval_field_elem(e, field, 64)?.abs_upper()) };
        let chi = match &s.twist {
            None => Rat::one(),
            Some(t) => {
                let mut m = Rat::zero();
                for v in &t.values {
                    m = m.max(ub(v)?);
                }
                m
            }
        };
        let coeffs = s.p.coeffs().iter().map(|c| Ok(ub(c)? * &chi)).collect::<Result<_>>()?;
        Ok(TermBound { coeffs })
    }

    fn at(&self, n: i64) -> Rat {
        let x = int(n);
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * &x + c)
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

/// Summation cutoff `N` such that the terms with `n > N` sum to at most
/// `2^-(prec+2)` in absolute value.
///
/// From `N` on, `f` is increasing with `f(n+1) - f(n) >= 1` nondecreasing,
/// and consecutive term bounds shrink by a factor of at least 2, so the tail
/// is at most twice its first term.
pub fn series_cutoff(s: &SeriesSpec, field: &NumberField, prec: u32) -> Result<i64> {
    validate_order_poly(&s.f)?;
    let df = forward_difference(&s.f);
    let d2f = forward_difference(&df);
    let start = cauchy_bound(&(df.clone() - RatPoly::one())).max(cauchy_bound(&d2f));
    let n0 = start.ceil().to_integer().to_i64().unwrap_or(i64::MAX).max(1) + 1;
    let qlo = q_lower_bound(field);
    let bound = TermBound::new(s, field)?;
    let log_q = qlo.to_f64().unwrap_or(2.0).log2();
    // floating estimate to skip the obviously insufficient range
    let mut n = n0;
    while {
        let fx = s.f.eval(&int(n + 1)).to_f64().unwrap_or(f64::MAX);
        let a = bound.at(n + 1).to_f64().unwrap_or(0.0).max(1e-300).log2();
        fx * log_q < prec as f64 + a + 2.0
    } {
        n += 1;
        if n > 1 << 24 {
            return Err(Error::PrecisionExhausted("series cutoff exceeds 2^24 terms".into()));
        }
    }
    let n = (n - 2).max(n0);
    let pow = |e: &Rat| -> Rat {
        let e = e.to_integer().to_u64().unwrap_or(u64::MAX);
        // qlo has a power-of-two denominator, so this stays cheap
        Rat::new(num_traits::pow(qlo.numer().clone(), e as usize), num_traits::pow(qlo.denom().clone(), e as usize))
    };
    let deg_p = bound.degree() as u32;
    let target = Rat::new(BigInt::one(), BigInt::one() << (prec + 2));
    for cand in n..n + (1 << 20) {
        let f_next = s.f.eval(&int(cand + 1));
        if f_next < Rat::one() {
            continue;
        }
        let ratio = Rat::new(BigInt::from(cand + 1), BigInt::from(cand));
        let cond1 = pow(&df.eval(&int(cand))) >= int(2) * num_traits::pow(ratio, deg_p as usize);
        if !cond1 {
            continue;
        }
        let cond2 = int(2) * bound.at(cand + 1) <= &target * pow(&f_next);
        if cond2 {
            return Ok(cand);
        }
    }
    Err(Error::PrecisionExhausted("no series cutoff found".into()))
}

fn ceil_log2(n: i64) -> u32 {
    64 - (n.max(1) as u64 - 1).leading_zeros()
}

/// Partial sum `sum_{n=1}^{upto} a(n) q^(-f(n))` at scale `w`.
fn partial_sum(s: &SeriesSpec, q: &RealBall, qinv: &RealBall, upto: i64) -> Result<RealBall> {
    let mut sum = RealBall::zero(q.prec);
    for n in 1..=upto {
        let a = s.coefficient(n);
        if a.is_zero() {
            continue;
        }
        let e = s.f.eval(&int(n)).to_integer().to_i64().ok_or_else(|| {
            Error::PrecisionExhausted("exponent out of range".into())
        })?;
        let qp = if e >= 0 { qinv.pow(e as u64) } else { q.pow(e.unsigned_abs()) };
        sum = sum.add(&horner_at(&a, q).mul(&qp));
    }
    Ok(sum)
}

/// `sum_{n>=1} a(n) / q^f(n)` with radius at most `2^-prec`.
///
/// Convergence only needs `q > 1`, which every [`NumberField`] guarantees.
pub fn eval_series(s: &SeriesSpec, field: &NumberField, prec: u32) -> Result<RealBall> {
    check_prec(prec)?;
    if s.p.is_zero() || s.twist.as_ref().is_some_and(|t| t.values.iter().all(|v| v.is_zero())) {
        return Ok(RealBall::zero(prec));
    }
    let n = series_cutoff(s, field, prec)?;
    let mut guard = 32 + ceil_log2(n);
    for _ in 0..MAX_RETRIES {
        let w = prec + guard;
        let q = eval_base(field, w)?;
        let qinv = q.inv()?;
        let sum = partial_sum(s, &q, &qinv, n)?;
        // the sum sits at the scale of `q`, which carries its own guard bits
        let tail = BigInt::one() << (sum.prec - prec - 2);
        let out = sum.inflate(&tail);
        if out.radius_at_most_pow2(prec as i64) {
            return Ok(out);
        }
        guard *= 2;
    }
    Err(Error::PrecisionExhausted(format!("series did not reach {prec} bits")))
}

/// Partial sum to an explicit bound, for tail-soundness checks.
pub fn eval_partial_sum(s: &SeriesSpec, field: &NumberField, upto: i64, prec: u32) -> Result<RealBall> {
    let w = prec + 32 + ceil_log2(upto);
    let q = eval_base(field, w)?;
    partial_sum(s, &q, &q.inv()?, upto)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Theta {
    #[serde(rename = "theta2")]
    Two,
    #[serde(rename = "theta3")]
    Three,
    #[serde(rename = "theta4")]
    Four,
}

impl Theta {
    pub fn from_index(m: u32) -> Result<Self> {
        match m {
            2 => Ok(Theta::Two),
            3 => Ok(Theta::Three),
            4 => Ok(Theta::Four),
            _ => Err(Error::Parse(format!("theta index must be 2, 3 or 4, got {m}"))),
        }
    }

    /// Exponent `f(n)` of the series `sum_{n>=1} q^(-i f(n))`.
    fn exponent(self, i: u32) -> RatPoly {
        let i = int(i as i64);
        match self {
            Theta::Two => RatPoly::new(vec![Rat::zero(), i.clone(), i]),
            _ => RatPoly::new(vec![Rat::zero(), Rat::zero(), i]),
        }
    }
}

/// `x (x-1) ... (x-k+1)`.
fn falling_factorial(k: u32) -> RatPoly {
    (0..k).fold(RatPoly::one(), |acc, j| acc * RatPoly::new(vec![int(-(j as i64)), Rat::one()]))
}

/// The `k`-th derivative of the theta series at `z = q^-i`, as
/// `constant + q^(ik) * sum`, with the sum as a [`SeriesSpec`].
fn theta_parts(m: Theta, i: u32, k: u32) -> (Rat, SeriesSpec) {
    let f = m.exponent(i);
    let numer = falling_factorial(k).compose(&f).scale(&int(2));
    let constant = match (m, k) {
        (Theta::Two, 0) => int(2),
        (_, 0) => int(1),
        _ => Rat::zero(),
    };
    let mut s = SeriesSpec::rational(f, &numer);
    if m == Theta::Four {
        s = s.with_twist(Twist::alternating());
    }
    (constant, s)
}

fn theta_value(m: Theta, field: &NumberField, i: u32, k: u32, prec: u32) -> Result<RealBall> {
    check_prec(prec)?;
    let (constant, s) = theta_parts(m, i, k);
    let inner_prec = prec + 4 + k * field_log2_ceil(field) * i;
    let sum = eval_series(&s, field, inner_prec)?;
    let scaled = if k == 0 {
        sum
    } else {
        let q = eval_base(field, inner_prec)?;
        sum.mul(&q.pow((i * k) as u64))
    };
    let out = scaled.add(&RealBall::from_rat(&constant, scaled.prec));
    if !out.radius_at_most_pow2(prec as i64) {
        return Err(Error::PrecisionExhausted("theta evaluation".into()));
    }
    Ok(out)
}

fn field_log2_ceil(field: &NumberField) -> u32 {
    let (_, hi) = field.root_hint();
    let h = hi.ceil().to_integer().to_u64().unwrap_or(u64::MAX).max(2);
    64 - (h - 1).leading_zeros()
}

/// Theta constant at `z = q^-i`. For `Theta::Two` this is the normalized
/// `q^(i/4) theta2(q^-i) = 2 sum_{n>=0} q^(-i n (n+1))`.
pub fn eval_theta(m: Theta, field: &NumberField, i: u32, prec: u32) -> Result<RealBall> {
    if i == 0 {
        return Err(Error::Hypothesis("theta power must be positive".into()));
    }
    theta_value(m, field, i, 0, prec)
}

/// `d^k/dz^k` at `z = 1/q` of `z^(-1/4) theta2(z)`, `theta3(z)` or `theta4(z)`.
pub fn eval_theta_derivative(m: Theta, k: u32, field: &NumberField, prec: u32) -> Result<RealBall> {
    theta_value(m, field, 1, k, prec)
}

/// `theta2(q^-i) = q^(-i/4) * eval_theta(Two, i)`.
pub fn eval_theta2_unnormalized(field: &NumberField, i: u32, prec: u32) -> Result<RealBall> {
    let w = prec + 16;
    let norm = eval_theta(Theta::Two, field, i, w)?;
    let q = eval_base(field, w)?;
    let factor = if i % 4 == 0 {
        q.pow((i / 4) as u64).inv()?
    } else {
        q.pow(i as u64).sqrt()?.sqrt()?.inv()?
    };
    Ok(norm.mul(&factor))
}

/// Series whose sum is `theta(q^-i)` minus its constant term, for building
/// relation problems out of theta values.
pub fn theta_series(m: Theta, i: u32) -> (Rat, SeriesSpec) {
    theta_parts(m, i, 0)
}

/// Numerator `P` with rational coefficients lifted into the field.
pub fn lift_poly(p: &RatPoly) -> FieldPoly {
    p.map(|c| FieldElem::rational(c.clone()))
}
