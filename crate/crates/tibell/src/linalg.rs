//! Exact rational linear algebra: reduced row echelon form, rank, nullspace
//! and linear-system solving over `BigRational`.
//!
//! Pivoting is deterministic (first nonzero entry in column order), so every
//! derived basis is reproducible bit-for-bit.

use num_traits::{One, Zero};

use crate::scalar::Rat;

/// Reduces `rows` in place to reduced row echelon form over the first
/// `ncols` columns; returns the pivot column indices in order.
pub fn rref(rows: &mut Vec<Vec<Rat>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..rows[i].len() {
                    let sub = &f * &rows[r][j];
                    rows[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Rank of the matrix given as rows of length `ncols`.
pub fn rank(rows: &[Vec<Rat>], ncols: usize) -> usize {
    let mut work: Vec<Vec<Rat>> = rows.to_vec();
    rref(&mut work, ncols).len()
}

/// Basis of the right nullspace {x : A x = 0}, one vector per free column,
/// in ascending free-column order, with the free coordinate set to 1.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut work: Vec<Vec<Rat>> = rows.to_vec();
    let pivots = rref(&mut work, ncols);
    let is_pivot = {
        let mut v = vec![false; ncols];
        for &c in &pivots {
            v[c] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..ncols {
        if is_pivot[free] {
            continue;
        }
        let mut x = vec![Rat::zero(); ncols];
        x[free] = Rat::one();
        for (row_idx, &pc) in pivots.iter().enumerate() {
            x[pc] = -work[row_idx][free].clone();
        }
        basis.push(x);
    }
    basis
}

/// Solves A x = b exactly. Returns `None` if the system is inconsistent;
/// under-determined systems get free variables set to 0.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.len(), b.len());
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut work: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut work, ncols);
    // Inconsistency: a row 0 = nonzero.
    for row in &work {
        if row[..ncols].iter().all(|x| x.is_zero()) && !row[ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row_idx, &pc) in pivots.iter().enumerate() {
        x[pc] = work[row_idx][ncols].clone();
    }
    Some(x)
}

/// Dot product of two equal-length rational vectors.
pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dimension of the affine span of a point set (0 for a single point).
pub fn affine_rank(points: &[Vec<Rat>]) -> usize {
    assert!(!points.is_empty());
    let base = &points[0];
    let rows: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    if rows.is_empty() {
        return 0;
    }
    rank(&rows, base.len())
}
