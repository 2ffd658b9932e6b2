mod common;

use common::*;
use lacunary::lattice::{
    find_integer_relation, gram_determinant, lll_reduce, relation_residual, verify_reduced, IntLattice,
};
use lacunary::serieval::RealBall;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;


fn random_lattice(seed: u64) -> IntLattice {
    let mut r = rng(seed);
    let n = r.gen_range(2..=7);
    let m = n + r.gen_range(0..=2);
    loop {
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..m).map(|_| r.gen_range(-1000..=1000)).collect()).collect();
        let l = IntLattice::from_i64(&rows).unwrap();
        if !gram_determinant(&l).is_zero() {
            return l;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn lll_output_is_reduced(seed in any::<u64>(), num in 26i64..=99) {
        let l = random_lattice(seed);
        let d = rat(num, 100);
        let out = lll_reduce(&l, &d).unwrap();
        prop_assert!(verify_reduced(&out.basis, &d));
        // reduced = transform * input, unimodular
        for (t, row) in out.transform.iter().zip(&out.basis.basis) {
            for col in 0..l.dim() {
                let s: BigInt = t.iter().zip(&l.basis).map(|(a, b)| a * &b[col]).sum();
                prop_assert_eq!(&s, &row[col]);
            }
        }
        prop_assert_eq!(gram_determinant(&out.basis), gram_determinant(&l));
        prop_assert_eq!(gram_determinant(&IntLattice::new(out.transform.clone()).unwrap()), BigInt::one());
    }
}

#[test]
fn planted_relations_are_recovered() {
    let height = BigInt::from(10_000);
    for seed in 0..100 {
        let (xs, c) = planted(seed, 336);
        let rep = find_integer_relation(&xs, &height, 320).unwrap();
        assert!(rep.found, "seed {seed}");
        assert_eq!(rep.coeffs, c, "seed {seed}");
    }
}

#[test]
fn reported_relations_survive_double_precision() {
    let height = BigInt::from(10_000);
    for seed in 0..30 {
        let (xs, _) = planted(seed, 336);
        let rep = find_integer_relation(&xs, &height, 320).unwrap();
        // the same construction at twice the scale is an independent
        // re-evaluation of the same reals up to the rounding of x_n
        let (fine, _) = planted(seed, 672);
        let res = relation_residual(&fine, &rep.coeffs);
        assert!(res.contains_zero() && res.width_at_most_pow2(600), "seed {seed}");
    }
}

#[test]
fn independent_values_give_no_relation() {
    let height = BigInt::from(1000);
    let mut r = rng(99);
    for _ in 0..20 {
        let xs: Vec<RealBall> =
            (0..4).map(|_| RealBall { mid: random_signed(&mut r, 400), rad: BigInt::zero(), prec: 400 }).collect();
        let rep = find_integer_relation(&xs, &height, 400).unwrap();
        if rep.found {
            // anything reported must be a genuine relation among these exact values
            assert!(relation_residual(&xs, &rep.coeffs).mid.is_zero());
        }
    }
}
