//! Exact real-root counting and bracketing over `Q`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Rat, RatPoly};

fn sign(r: &Rat) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Sturm chain of a squarefree polynomial.
pub struct SturmChain {
    chain: Vec<RatPoly>,
}

impl SturmChain {
    pub fn new(p: &RatPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            if r.is_zero() {
                break;
            }
            chain.push(-r);
        }
        SturmChain { chain }
    }

    fn variations(&self, x: &Rat) -> usize {
        let signs: Vec<i8> = self
            .chain
            .iter()
            .map(|q| sign(&q.eval(x)))
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &Rat, b: &Rat) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// Shrinks an isolating interval `(lo, hi)` of a simple root with a sign
/// change until its width is at most `2^-bits`. Newton steps are tried
/// first and accepted only when they produce a verified sign change;
/// bisection is the fallback.
pub fn refine_root(p: &RatPoly, lo: &Rat, hi: &Rat, bits: u32) -> (Rat, Rat) {
    let (mut a, mut b) = (lo.clone(), hi.clone());
    if p.eval(&a).is_zero() {
        return (a.clone(), a);
    }
    if p.eval(&b).is_zero() {
        return (b.clone(), b);
    }
    let dp = p.derivative();
    let sa = sign(&p.eval(&a));
    let target = Rat::new(BigInt::one(), BigInt::one() << bits);
    while &b - &a > target {
        let w = &b - &a;
        let mid = (&a + &b) / Rat::from_integer(BigInt::from(2));
        let mut accepted = false;
        let dv = dp.eval(&mid);
        if !dv.is_zero() {
            let newton = &mid - p.eval(&mid) / dv;
            if newton > a && newton < b {
                // aim for roughly squared width, snapped to a dyadic grid
                let wbits = log2_floor_inv(&w);
                let k = (2 * wbits + 2).min(bits + 2);
                let scale = BigInt::one() << k;
                let x = Rat::new((&newton * Rat::from_integer(scale.clone())).round().to_integer(), scale.clone());
                let eps = Rat::new(BigInt::one(), scale >> 1u32);
                let (l, r) = (&x - &eps, &x + &eps);
                if l > a && r < b {
                    let (sl, sr) = (sign(&p.eval(&l)), sign(&p.eval(&r)));
                    if sl == 0 {
                        return (l.clone(), l);
                    }
                    if sr == 0 {
                        return (r.clone(), r);
                    }
                    if sl != sr {
                        a = l;
                        b = r;
                        accepted = true;
                    }
                }
            }
        }
        if !accepted {
            let sm = sign(&p.eval(&mid));
            if sm == 0 {
                return (mid.clone(), mid);
            }
            if sm == sa {
                a = mid;
            } else {
                b = mid;
            }
        }
    }
    (a, b)
}

/// `floor(log2(1/w))` for `0 < w`, clamped at zero.
fn log2_floor_inv(w: &Rat) -> u32 {
    let inv = w.recip();
    let q = inv.to_integer();
    if q.is_zero() {
        0
    } else {
        (q.bits() - 1) as u32
    }
}
