//! Gaussian elimination over any exact field (rationals, Gaussian rationals).

use num_traits::Num;

use crate::error::{Error, Result};

/// Dense row-major matrix.
pub type Matrix<T> = Vec<Vec<T>>;

/// Reduced row echelon form and the pivot column of each nonzero row.
pub fn row_reduce<T: Clone + Num>(mut m: Matrix<T>) -> (Matrix<T>, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = T::one() / m[r][c].clone();
        for v in m[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..cols {
                let delta = f.clone() * m[r][j].clone();
                m[i][j] = m[i][j].clone() - delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank<T: Clone + Num>(m: &Matrix<T>) -> usize {
    row_reduce(m.clone()).1.len()
}

/// Basis of `{x : m x = 0}`; `cols` fixes the width when `m` has no rows.
pub fn nullspace<T: Clone + Num>(m: &Matrix<T>, cols: usize) -> Vec<Vec<T>> {
    let (rref, pivots) = row_reduce(m.clone());
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![T::zero(); cols];
            x[f] = T::one();
            for (row, &p) in pivots.iter().enumerate() {
                x[p] = T::zero() - rref[row][f].clone();
            }
            x
        })
        .collect()
}

/// Solution set of `m x = b`: a particular solution plus a nullspace basis,
/// or `None` when the system is inconsistent.
pub fn solve_affine<T: Clone + Num>(m: &Matrix<T>, b: &[T], cols: usize) -> Option<(Vec<T>, Vec<Vec<T>>)> {
    let augmented: Matrix<T> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (rref, pivots) = row_reduce(augmented);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![T::zero(); cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = rref[row][cols].clone();
    }
    Some((x, nullspace(m, cols)))
}

/// Unique solution of a square nonsingular system.
pub fn solve_square<T: Clone + Num>(m: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) || b.len() != n {
        return Err(Error::Solve("system is not square".into()));
    }
    match solve_affine(m, b, n) {
        Some((x, kernel)) if kernel.is_empty() => Ok(x),
        _ => Err(Error::Solve("matrix is singular".into())),
    }
}
