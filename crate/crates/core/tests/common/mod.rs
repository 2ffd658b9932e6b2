//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use lacunary::polyq::{affine_compose, from_binomial_basis, is_integer_valued, AffineMap};
use lacunary::{Rat, RatPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn poly(c: &[i64]) -> RatPoly {
    RatPoly::new(c.iter().map(|&x| int(x)).collect())
}

/// Monomial coefficients with numerators in `[-10, 10]` and denominators
/// in `1..=4`, positive lead, integer-valued; found by rejection.
pub fn bounded_int_valued(r: &mut impl Rng, deg: usize) -> RatPoly {
    loop {
        let mut c: Vec<Rat> = (0..=deg).map(|_| rat(r.gen_range(-10..=10), r.gen_range(1..=4))).collect();
        c[deg] = rat(r.gen_range(1..=10), r.gen_range(1..=4));
        let f = RatPoly::new(c);
        if is_integer_valued(&f) {
            return f;
        }
    }
}

pub fn within_bounds(f: &RatPoly) -> bool {
    f.coeffs().iter().all(|c| c.numer().abs() <= BigInt::from(10) && c.denom() <= &BigInt::from(4))
}

/// Integer-valued polynomial from small binomial-basis coefficients.
pub fn binomial_random(r: &mut impl Rng, deg: usize, bound: i64) -> RatPoly {
    let mut c: Vec<Rat> = (0..=deg).map(|_| int(r.gen_range(-bound..=bound))).collect();
    c[deg] = int(r.gen_range(1..=bound));
    from_binomial_basis(&c)
}

/// `f(b x + c) + d`.
pub fn reparam(f: &RatPoly, b: &Rat, c: &Rat, d: &Rat) -> RatPoly {
    let m = AffineMap::new(b.clone(), c.clone()).unwrap();
    affine_compose(f, &m) + RatPoly::constant(d.clone())
}

/// Positive rationals `p / q` with `1 <= p, q <= 8`, deduplicated.
pub fn box_ratios() -> Vec<Rat> {
    let mut v: Vec<Rat> = (1..=8).flat_map(|p| (1..=8).map(move |q| rat(p, q))).collect();
    v.sort();
    v.dedup();
    v
}

pub const BOX: i64 = 20;

/// Every `A` in `[-20, 20]` for which some `B = p/q` (`p, q <= 8`) and
/// integers `C, D` in `[-20, 20]` give `fi(x + A) = fj(B x + C) + D`.
///
/// `B` is pre-filtered by equality of leading coefficients, which is one
/// of the coefficient identities being tested anyway.
pub fn box_oracle(fi: &RatPoly, fj: &RatPoly) -> Vec<i64> {
    let (Some(d), Some(dj)) = (fi.degree(), fj.degree()) else { return vec![] };
    if d != dj {
        return vec![];
    }
    let li = fi.lead().unwrap().clone();
    let lj = fj.lead().unwrap().clone();
    let bs: Vec<Rat> = box_ratios()
        .into_iter()
        .filter(|b| {
            let mut bd = Rat::one();
            for _ in 0..d {
                bd *= b;
            }
            &lj * bd == li
        })
        .collect();
    if bs.is_empty() {
        return vec![];
    }
    let shifted: Vec<(i64, RatPoly)> =
        (-BOX..=BOX).map(|a| (a, reparam(fi, &Rat::one(), &int(a), &Rat::zero()))).collect();
    let mut found = Vec::new();
    for b in &bs {
        for c in -BOX..=BOX {
            let rhs = reparam(fj, b, &int(c), &Rat::zero());
            for (a, lhs) in &shifted {
                let diff = lhs - &rhs;
                if diff.degree().unwrap_or(0) == 0 {
                    let k = diff.coeff(0);
                    if k.is_integer() && k.abs() <= int(BOX) {
                        found.push(*a);
                    }
                }
            }
        }
    }
    found.sort_unstable();
    found.dedup();
    found
}

/// Whether `(B, C, D)` lies in the oracle's search box.
pub fn in_box(b: &Rat, c: &BigInt, d: &BigInt) -> bool {
    box_ratios().contains(b) && c.abs() <= BigInt::from(BOX) && d.abs() <= BigInt::from(BOX)
}

/// `Q(q)` for the monic integer polynomial with coefficients `c` (lowest
/// first) and the real root in `[lo, hi]`.
pub fn field(c: &[i64], lo: Rat, hi: Rat) -> lacunary::numfield::NumberField {
    lacunary::numfield::field_new(poly(c), (lo, hi)).unwrap()
}

pub fn golden() -> lacunary::numfield::NumberField {
    field(&[-1, -1, 1], rat(3, 2), rat(17, 10))
}

pub fn lehmer() -> lacunary::numfield::NumberField {
    field(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1], rat(117, 100), rat(118, 100))
}

/// Uniform integer in `(-2^bits, 2^bits)`.
pub fn random_signed(r: &mut impl Rng, bits: u32) -> BigInt {
    let bytes: Vec<u8> = (0..bits.div_ceil(8)).map(|_| r.gen()).collect();
    let mag = num_bigint::BigUint::from_bytes_le(&bytes) >> (bytes.len() as u32 * 8 - bits);
    let sign = if r.gen_bool(0.5) { num_bigint::Sign::Minus } else { num_bigint::Sign::Plus };
    BigInt::from_biguint(sign, mag)
}

/// Rank of a rational matrix by plain Gaussian elimination.
pub fn rank(mut m: Vec<Vec<Rat>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                for k in c..cols {
                    let t = &f * &m[r][k];
                    m[i][k] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

fn pow2(e: &BigInt) -> Rat {
    let e: i64 = e.try_into().unwrap();
    if e >= 0 {
        Rat::from_integer(BigInt::one() << e as u64)
    } else {
        Rat::new(BigInt::one(), BigInt::one() << (-e) as u64)
    }
}

/// Sequence-level brute force over `q = 2`: the series are dependent
/// exactly when some class admits `k != 0` with
/// `sum_j k_j 2^(D_j) a_j((n + C_j) / B_j) = 0` at every `n`, the term
/// being absent unless `B_j | n + C_j`.  The identity is checked on
/// `n = 0..=N`, `N = (max deg P + 1) K + K`, which is enough because on
/// every residue class mod `K` the sum is a polynomial in `n`.
pub fn sampling_oracle_dependent(series: &[lacunary::criterion::SeriesSpec]) -> bool {
    use lacunary::equiv::{canonical_form, partition_classes};
    let fs: Vec<RatPoly> = series.iter().map(|s| s.f.clone()).collect();
    let classes = partition_classes(&fs).unwrap();
    for class in classes {
        let polys: Vec<RatPoly> = class.iter().map(|&j| fs[j].clone()).collect();
        let form = canonical_form(&polys).unwrap();
        let mut k = BigInt::one();
        let mut maxdeg = 0;
        for (&j, t) in class.iter().zip(&form.triples) {
            let period = series[j].twist.as_ref().map_or(1, |tw| tw.period());
            k = num_integer::Integer::lcm(&k, &(&t.b * BigInt::from(period)));
            maxdeg = maxdeg.max(series[j].p.degree().unwrap_or(0));
        }
        let k: i64 = (&k).try_into().unwrap();
        let n_max = (maxdeg as i64 + 1) * k + k;
        let rows: Vec<Vec<Rat>> = (0..=n_max)
            .map(|n| {
                class
                    .iter()
                    .zip(&form.triples)
                    .map(|(&j, t)| {
                        let shifted = BigInt::from(n) + &t.c;
                        if !num_integer::Integer::is_multiple_of(&shifted, &t.b) {
                            return Rat::zero();
                        }
                        let m: i64 = (&(shifted / &t.b)).try_into().unwrap();
                        let a = series[j].coefficient(m).to_rat().expect("rational coefficients");
                        a * pow2(&t.d)
                    })
                    .collect()
            })
            .collect();
        if rank(rows) < class.len() {
            return true;
        }
    }
    false
}

/// Small random Theorem 2 instance over `q = 2`: up to three series with
/// order degree <= 4 and numerator degree <= 2.  About half are built to
/// share a class through `f(2x - 1)` and `f(2x)` splittings, a third of
/// those with exactly matching numerators.
pub fn theorem2_instance(seed: u64) -> Vec<lacunary::criterion::SeriesSpec> {
    use lacunary::criterion::{SeriesSpec, Twist};
    use lacunary::numfield::FieldElem;
    let mut r = rng(seed);
    let deg = r.gen_range(2..=4);
    let f = binomial_random(&mut r, deg, 3);
    let small_p = |r: &mut ChaCha8Rng| {
        let d = r.gen_range(0..=2);
        let mut c: Vec<Rat> = (0..=d).map(|_| int(r.gen_range(-3..=3))).collect();
        c[d] = int(r.gen_range(1..=3));
        RatPoly::new(c)
    };
    let mut out = Vec::new();
    match r.gen_range(0..3) {
        0 => {
            let n = r.gen_range(1..=3);
            for _ in 0..n {
                let d = r.gen_range(2..=4);
                let fj = if r.gen_bool(0.5) {
                    reparam(&f, &int(r.gen_range(1..=2)), &int(r.gen_range(-1..=1)), &int(r.gen_range(-2..=2)))
                } else {
                    binomial_random(&mut r, d, 3)
                };
                out.push(SeriesSpec::rational(fj, &small_p(&mut r)));
            }
        }
        _ => {
            let p1 = small_p(&mut r);
            let d1 = int(r.gen_range(-2..=2));
            let d2 = int(r.gen_range(-2..=2));
            let c1 = int(r.gen_range(1..=2)) * if r.gen_bool(0.5) { int(1) } else { int(-1) };
            let mut p2 = reparam(&p1, &int(2), &int(-1), &Rat::zero()).scale(&c1);
            let mut p3 = reparam(&p1, &int(2), &Rat::zero(), &Rat::zero());
            if r.gen_bool(0.5) {
                // break the matching, keeping degrees <= 2
                let bump = RatPoly::new(vec![Rat::zero(); r.gen_range(0..=2)].into_iter().chain([int(1)]).collect());
                if r.gen_bool(0.5) {
                    p2 = p2 + bump;
                } else {
                    p3 = p3 + bump;
                }
            }
            out.push(SeriesSpec::rational(f.clone(), &p1));
            out.push(SeriesSpec::rational(reparam(&f, &int(2), &int(-1), &d1), &p2));
            out.push(SeriesSpec::rational(reparam(&f, &int(2), &Rat::zero(), &d2), &p3));
        }
    }
    if r.gen_bool(0.2) {
        let j = r.gen_range(0..out.len());
        let minus = FieldElem::rational(int(-1));
        let one = FieldElem::rational(int(1));
        let values = if r.gen_bool(0.5) { vec![one, minus] } else { vec![one.clone(), one, minus] };
        out[j] = out[j].clone().with_twist(Twist { values });
    }
    out.retain(|s| !s.p.is_zero());
    out
}

/// Half the pairs are reparametrizations of each other so that the
/// symbolic sets are not all empty; all stay within the coefficient bounds.
pub fn oracle_pair(seed: u64) -> (RatPoly, RatPoly) {
    let mut r = rng(seed);
    loop {
        let deg = r.gen_range(2..=4);
        let fi = bounded_int_valued(&mut r, deg);
        let fj = if r.gen_bool(0.5) {
            bounded_int_valued(&mut r, deg)
        } else {
            let b = [int(1), int(2), rat(1, 2)][r.gen_range(0..3)].clone();
            reparam(&fi, &b, &int(r.gen_range(-2..=2)), &int(r.gen_range(-3..=3)))
        };
        if within_bounds(&fj) && is_integer_valued(&fj) {
            return (fi, fj);
        }
    }
}

/// Divides out the content; first nonzero entry positive.
fn primitive(mut c: Vec<BigInt>) -> Vec<BigInt> {
    let g = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    for x in c.iter_mut() {
        *x = &*x / &g;
    }
    if c.iter().find(|x| !x.is_zero()).unwrap().is_negative() {
        for x in c.iter_mut() {
            *x = -&*x;
        }
    }
    c
}

/// Random reals `x_1..x_{n-1}` at `scale` bits and `x_n` chosen so that
/// `sum c_j x_j = 0` exactly up to the rounding of one division.
pub fn planted(seed: u64, scale: u32) -> (Vec<lacunary::serieval::RealBall>, Vec<BigInt>) {
    let mut r = rng(seed);
    let n = r.gen_range(2..=6usize);
    let mut c: Vec<BigInt> = (0..n).map(|_| BigInt::from(r.gen_range(-10_000..=10_000))).collect();
    while c[n - 1].is_zero() {
        c[n - 1] = BigInt::from(r.gen_range(-10_000..=10_000));
    }
    let mut xs: Vec<lacunary::serieval::RealBall> =
        (0..n - 1).map(|_| lacunary::serieval::RealBall { mid: random_signed(&mut r, scale + 1), rad: BigInt::zero(), prec: scale }).collect();
    let partial = lacunary::lattice::relation_residual(&xs, &c[..n - 1]);
    let last = partial.neg().div(&lacunary::serieval::RealBall::from_int(c[n - 1].clone(), scale)).unwrap();
    xs.push(last);
    (xs, primitive(c))
}

