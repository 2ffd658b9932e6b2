mod common;

use common::*;
use lacunary::criterion::{SeriesSpec, Twist};
use lacunary::numfield::{FieldElem, NumberField};
use lacunary::serieval::{
    eval_partial_sum, eval_series, eval_theta, eval_theta2_unnormalized, series_cutoff, RealBall, Theta,
};
use lacunary::RatPoly;
use num_bigint::BigInt;
use proptest::prelude::*;
use num_traits::{One, Zero};
use rand::Rng;

fn base(which: u8) -> NumberField {
    match which {
        0 => lacunary::numfield::integer_base(2).unwrap(),
        1 => lacunary::numfield::integer_base(3).unwrap(),
        _ => golden(),
    }
}

fn random_series(seed: u64) -> SeriesSpec {
    let mut r = rng(seed);
    let deg = r.gen_range(2..=4);
    let f = binomial_random(&mut r, deg, 3);
    let pdeg = r.gen_range(0..=2);
    let p = RatPoly::new((0..=pdeg).map(|_| rat(r.gen_range(-9..=9), r.gen_range(1..=3))).collect());
    let p = if p.is_zero() { RatPoly::one() } else { p };
    let s = SeriesSpec::rational(f, &p);
    if r.gen_bool(0.3) {
        let period = r.gen_range(2..=3);
        let values = (0..period).map(|_| FieldElem::rational(int(r.gen_range(-2..=2)))).collect();
        s.with_twist(Twist { values })
    } else {
        s
    }
}

fn overlaps(a: &RealBall, b: &RealBall) -> bool {
    a.lower() <= b.upper() && b.lower() <= a.upper()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn refinement_is_monotone(seed in any::<u64>(), which in 0u8..3, prec in 64u32..=200, extra in 1u32..=200) {
        let s = random_series(seed);
        let k = base(which);
        let coarse = eval_series(&s, &k, prec).unwrap();
        let fine = eval_series(&s, &k, prec + extra).unwrap();
        prop_assert!(coarse.inflate(&BigInt::from(1)).contains_ball(&fine));
    }

    #[test]
    fn tail_bound_is_sound(seed in any::<u64>(), which in 0u8..3, prec in 64u32..=320) {
        let s = random_series(seed);
        let k = base(which);
        let n = series_cutoff(&s, &k, prec).unwrap();
        let total = eval_series(&s, &k, prec).unwrap();
        // early terms may be huge when f dips negative, so raise the scale
        // until the partial sum is far sharper than the total
        let mut w = prec + 32;
        let longer = loop {
            let b = eval_partial_sum(&s, &k, n + 10, w).unwrap();
            if b.radius_at_most_pow2(prec as i64 + 40) {
                break b;
            }
            w *= 2;
        };
        prop_assert!(overlaps(&total, &longer));
        prop_assert!(total.contains_rat(&((longer.lower() + longer.upper()) / int(2))));
    }
}

#[test]
fn jacobi_identity_at_two() {
    let k = lacunary::numfield::integer_base(2).unwrap();
    for prec in [64u32, 128, 256, 512] {
        let t3 = eval_theta(Theta::Three, &k, 1, prec).unwrap();
        let t4 = eval_theta(Theta::Four, &k, 1, prec).unwrap();
        let t2 = eval_theta2_unnormalized(&k, 1, prec).unwrap();
        let d = t3.pow(4).sub(&t2.pow(4)).sub(&t4.pow(4));
        assert!(d.contains_zero(), "prec {prec}");
        assert!(d.width_at_most_pow2(prec as i64 - 8), "prec {prec}");
    }
}

#[test]
fn splitting_identity() {
    for which in 0..3 {
        let k = base(which);
        for prec in [64u32, 256] {
            let lhs = eval_theta(Theta::Three, &k, 1, prec).unwrap();
            let t2 = eval_theta2_unnormalized(&k, 4, prec).unwrap();
            let t3 = eval_theta(Theta::Three, &k, 4, prec).unwrap();
            assert!(lhs.sub(&t2).sub(&t3).contains_zero(), "base {which} prec {prec}");
        }
    }
}

#[test]
fn rational_integer_base_values() {
    // sum n / 2^(n^2) by direct summation of 12 terms
    let k = lacunary::numfield::integer_base(2).unwrap();
    let s = SeriesSpec::rational(poly(&[0, 0, 1]), &poly(&[0, 1]));
    let mut direct = 0f64;
    for n in 1..12 {
        direct += n as f64 / 2f64.powi(n * n);
    }
    let b = eval_series(&s, &k, 128).unwrap();
    assert!((b.mid_f64() - direct).abs() < 1e-15);
}


#[test]
fn tail_allowance_covers_first_omitted_term() {
    // the first omitted term here is about 2^-122.9, just under the
    // 2^-115 target; the enclosure must still contain the true sum
    let k = lacunary::numfield::integer_base(2).unwrap();
    let f = RatPoly::new(vec![int(-1), rat(-8, 3), rat(-1, 2), rat(1, 6)]);
    let s = SeriesSpec::rational(f, &RatPoly::new(vec![int(-2), rat(-7, 2), int(-2)]));
    let total = eval_series(&s, &k, 113).unwrap();
    let exact = eval_partial_sum(&s, &k, 40, 300).unwrap();
    assert!(total.contains_ball(&exact));
}
