use num_traits::Zero;

use super::{FieldElem, NumberField};
use crate::{Rat, RatPoly};

/// Matrix of multiplication by `a` on the power basis; column `k` holds
/// the coordinates of `a * q^k`.
pub fn multiplication_matrix(a: &FieldElem, field: &NumberField) -> Vec<Vec<Rat>> {
    let d = field.degree();
    let mut cols = Vec::with_capacity(d);
    let mut basis = field.one();
    for _ in 0..d {
        cols.push((a.clone() * basis.clone()).coords(d));
        basis = basis * field.gen();
    }
    (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
}

/// Characteristic polynomial via the Faddeev-LeVerrier recurrence.
pub fn char_poly(m: &[Vec<Rat>]) -> RatPoly {
    let n = m.len();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::from_integer(1.into());
    let mut mk = vec![vec![Rat::zero(); n]; n];
    for k in 1..=n {
        // mk <- A * mk + c_{n-k+1} I
        let mut next = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Rat::zero();
                for t in 0..n {
                    if !m[i][t].is_zero() && !mk[t][j].is_zero() {
                        s += &m[i][t] * &mk[t][j];
                    }
                }
                if i == j {
                    s += &coeffs[n - k + 1];
                }
                next[i][j] = s;
            }
        }
        mk = next;
        let mut tr = Rat::zero();
        for i in 0..n {
            for t in 0..n {
                tr += &m[i][t] * &mk[t][i];
            }
        }
        coeffs[n - k] = -tr / Rat::from_integer((k as i64).into());
    }
    RatPoly::new(coeffs)
}
