//! Exact Gaussian elimination over any [`Field`].

use crate::scalar::Field;

/// Reduced row echelon form of a matrix, with its pivot columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Echelon<T> {
    pub rows: Vec<Vec<T>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl<T: Field> Echelon<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.ncols];
                v[f] = T::one();
                for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                    v[pc] = -row[f].clone();
                }
                v
            })
            .collect()
    }
}

/// Row-reduces `rows` (each of length `ncols`).
pub fn echelon<T: Field>(mut rows: Vec<Vec<T>>, ncols: usize) -> Echelon<T> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].try_inv().expect("nonzero pivot must be invertible");
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * p.clone();
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    Echelon { rows, pivots, ncols }
}

/// Matrix-vector product, used to re-check kernel vectors.
pub fn mat_vec<T: Field>(rows: &[Vec<T>], v: &[T]) -> Vec<T> {
    rows.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
        })
        .collect()
}
