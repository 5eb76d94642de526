//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::rational::{primitive, QVec, Rational};

/// Reduced row echelon form of `rows` (each of length `cols`).
/// Returns the nonzero reduced rows and their pivot columns.
pub fn rref(rows: &[QVec], cols: usize) -> (Vec<QVec>, Vec<usize>) {
    let mut m: Vec<QVec> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &factor * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[QVec], cols: usize) -> usize {
    rref(rows, cols).1.len()
}

/// Basis of `{ v : row·v = 0 for every row }`, as primitive integer vectors.
pub fn nullspace(rows: &[QVec], cols: usize) -> Vec<QVec> {
    let (r, pivots) = rref(rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            primitive(&v)
        })
        .collect()
}

/// A basis of the row space of `rows`, in reduced echelon form.
pub fn row_basis(rows: &[QVec], cols: usize) -> Vec<QVec> {
    rref(rows, cols).0
}

/// Whether `v` lies in the linear span of `rows`.
pub fn in_span(rows: &[QVec], v: &[Rational]) -> bool {
    let cols = v.len();
    let base = rank(rows, cols);
    let mut ext = rows.to_vec();
    ext.push(v.to_vec());
    rank(&ext, cols) == base
}

/// Solves `Σ c_i rows_i = v` if possible, returning the coefficients.
pub fn solve_combination(rows: &[QVec], v: &[Rational]) -> Option<QVec> {
    let k = rows.len();
    let d = v.len();
    // Augmented system: unknowns c_1..c_k, one equation per coordinate.
    let eqs: Vec<QVec> = (0..d)
        .map(|j| {
            let mut e: QVec = rows.iter().map(|r| r[j].clone()).collect();
            e.push(v[j].clone());
            e
        })
        .collect();
    let (r, pivots) = rref(&eqs, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut c = vec![Rational::zero(); k];
    for (row, &p) in r.iter().zip(&pivots) {
        c[p] = row[k].clone();
    }
    Some(c)
}
