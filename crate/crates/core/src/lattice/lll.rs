//! Integral LLL (Cohen, Algorithm 2.6.7): all Gram-Schmidt data is kept as
//! the integers `d_i` (Gram determinants) and `lambda_{i,j} = d_j mu_{i,j}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Rat, Result};

/// Row-convention integer lattice basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLattice {
    pub basis: Vec<Vec<BigInt>>,
}

/// Reduced basis together with the unimodular `transform` such that
/// `reduced = transform * input`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LllOutput {
    pub basis: IntLattice,
    pub transform: Vec<Vec<BigInt>>,
}

impl IntLattice {
    pub fn new(basis: Vec<Vec<BigInt>>) -> Result<Self> {
        if let Some(first) = basis.first() {
            if basis.iter().any(|r| r.len() != first.len()) {
                return Err(Error::Parse("lattice rows have different lengths".into()));
            }
        }
        Ok(IntLattice { basis })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        IntLattice::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.first().map_or(0, Vec::len)
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub_multiple(row: &mut [BigInt], other: &[BigInt], q: &BigInt) {
    for (x, y) in row.iter_mut().zip(other) {
        *x -= q * y;
    }
}

/// Nearest integer to `a / b` for `b > 0`.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    (a * 2u32 + b).div_floor(&(b * 2u32))
}

struct State {
    b: Vec<Vec<BigInt>>,
    h: Vec<Vec<BigInt>>,
    // 1-based: d[0] = 1, d[i] for row i-1
    d: Vec<BigInt>,
    // lambda[k][j], 1-based on both
    lam: Vec<Vec<BigInt>>,
}

impl State {
    fn red(&mut self, k: usize, l: usize) {
        if (&self.lam[k][l] * 2u32).abs() > self.d[l] {
            let q = round_div(&self.lam[k][l], &self.d[l]);
            let bl = self.b[l - 1].clone();
            sub_multiple(&mut self.b[k - 1], &bl, &q);
            let hl = self.h[l - 1].clone();
            sub_multiple(&mut self.h[k - 1], &hl, &q);
            let dl = self.d[l].clone();
            self.lam[k][l] -= &q * dl;
            for i in 1..l {
                let li = self.lam[l][i].clone();
                self.lam[k][i] -= &q * li;
            }
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.b.swap(k - 1, k - 2);
        self.h.swap(k - 1, k - 2);
        for j in 1..k - 1 {
            let t = self.lam[k][j].clone();
            self.lam[k][j] = self.lam[k - 1][j].clone();
            self.lam[k - 1][j] = t;
        }
        let lam = self.lam[k][k - 1].clone();
        let bb = (&self.d[k - 2] * &self.d[k] + &lam * &lam) / &self.d[k - 1];
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&self.d[k] * &self.lam[i][k - 1] - &lam * &t) / &self.d[k - 1];
            self.lam[i][k - 1] = (&bb * &t + &lam * &self.lam[i][k]) / &self.d[k];
        }
        self.d[k - 1] = bb;
    }
}

/// `delta`-LLL reduction with `delta = a/b` in `(1/4, 1)`.
pub fn lll_reduce(lattice: &IntLattice, delta: &Rat) -> Result<LllOutput> {
    let quarter = Rat::new(BigInt::one(), BigInt::from(4));
    if *delta <= quarter || *delta >= Rat::one() {
        return Err(Error::Parse(format!("LLL delta must lie in (1/4, 1), got {delta}")));
    }
    let n = lattice.rank();
    let identity: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    if n == 0 {
        return Ok(LllOutput { basis: lattice.clone(), transform: identity });
    }
    let (da, db) = (delta.numer().clone(), delta.denom().clone());
    let mut st = State {
        b: lattice.basis.clone(),
        h: identity,
        d: vec![BigInt::zero(); n + 1],
        lam: vec![vec![BigInt::zero(); n + 1]; n + 1],
    };
    st.d[0] = BigInt::one();
    st.d[1] = dot(&st.b[0], &st.b[0]);
    if st.d[1].is_zero() {
        return Err(Error::DependentBasis);
    }
    let mut k = 2;
    let mut kmax = 1;
    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&st.b[k - 1], &st.b[j - 1]);
                for i in 1..j {
                    u = (&st.d[i] * &u - &st.lam[k][i] * &st.lam[j][i]) / &st.d[i - 1];
                }
                if j < k {
                    st.lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::DependentBasis);
                    }
                    st.d[k] = u;
                }
            }
        }
        loop {
            st.red(k, k - 1);
            let lam = &st.lam[k][k - 1];
            let lhs = &db * (&st.d[k] * &st.d[k - 2] + lam * lam);
            let rhs = &da * &st.d[k - 1] * &st.d[k - 1];
            if lhs < rhs {
                st.swap(k, kmax);
                if k > 2 {
                    k -= 1;
                }
            } else {
                for l in (1..k - 1).rev() {
                    st.red(k, l);
                }
                k += 1;
                break;
            }
        }
    }
    Ok(LllOutput { basis: IntLattice { basis: st.b }, transform: st.h })
}

/// Exact rational Gram-Schmidt check of size reduction and the Lovász
/// condition.
pub fn verify_reduced(lattice: &IntLattice, delta: &Rat) -> bool {
    let n = lattice.rank();
    let rows: Vec<Vec<Rat>> = lattice
        .basis
        .iter()
        .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    let rdot = |a: &[Rat], b: &[Rat]| -> Rat { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let mut star: Vec<Vec<Rat>> = Vec::with_capacity(n);
    let mut norms: Vec<Rat> = Vec::with_capacity(n);
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    for i in 0..n {
        let mut v = rows[i].clone();
        let mut mu_last = Rat::zero();
        for j in 0..i {
            if norms[j].is_zero() {
                return false;
            }
            let mu = rdot(&rows[i], &star[j]) / &norms[j];
            if mu.abs() > half {
                return false;
            }
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= &mu * y;
            }
            if j + 1 == i {
                mu_last = mu;
            }
        }
        let nv = rdot(&v, &v);
        if i > 0 && nv < (delta - &mu_last * &mu_last) * &norms[i - 1] {
            return false;
        }
        star.push(v);
        norms.push(nv);
    }
    true
}

/// Square of the absolute value of the determinant of the Gram matrix,
/// i.e. `det(B B^T)`, computed by fraction-free elimination.
pub fn gram_determinant(lattice: &IntLattice) -> BigInt {
    let n = lattice.rank();
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| dot(&lattice.basis[i], &lattice.basis[j])).collect())
        .collect();
    // Bareiss
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * prev
}
