//! Dense exact linear algebra over the rationals: row reduction, rank,
//! kernels and linear solves.

use num_traits::{One, Zero};

use crate::graded::Q;

pub type Matrix = Vec<Vec<Q>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Q::zero(); cols]; rows]
}

/// Reduced row echelon form. Returns the reduced matrix (zero rows dropped)
/// and the pivot column of each remaining row.
pub fn rref(mut m: Matrix, cols: usize) -> (Matrix, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Q::one() / &m[row][col];
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (x, y) in other.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    (m, pivots)
}

pub fn rank(m: &Matrix, cols: usize) -> usize {
    rref(m.clone(), cols).1.len()
}

/// Basis of `{x : m x = 0}`, one vector per free column, in column order.
pub fn kernel(m: &Matrix, cols: usize) -> Vec<Vec<Q>> {
    let (r, pivots) = rref(m.clone(), cols);
    let mut is_pivot = vec![None; cols];
    for (i, &p) in pivots.iter().enumerate() {
        is_pivot[p] = Some(i);
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| is_pivot[c].is_none()) {
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r[i][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Some solution of `m x = b`, or `None` if the system is inconsistent.
pub fn solve(m: &Matrix, cols: usize, b: &[Q]) -> Option<Vec<Q>> {
    let aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r[i][cols].clone();
    }
    Some(x)
}

/// Indices of a maximal linearly independent subset of `vectors`, chosen
/// greedily in input order.
pub fn independent_subset(vectors: &[Vec<Q>], cols: usize) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut acc: Matrix = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        acc.push(v.clone());
        if rank(&acc, cols) == chosen.len() + 1 {
            chosen.push(i);
        } else {
            acc.pop();
        }
    }
    chosen
}

pub fn mat_vec(m: &Matrix, v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::q;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&a, 3), 2);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = m(&[&[1, 2, 3], &[0, 1, 1]]);
        let ker = kernel(&a, 3);
        assert_eq!(ker.len(), 1);
        assert!(mat_vec(&a, &ker[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = m(&[&[1, 1], &[1, 1]]);
        assert!(solve(&a, 2, &[q(1), q(2)]).is_none());
        let x = solve(&a, 2, &[q(3), q(3)]).unwrap();
        assert_eq!(mat_vec(&a, &x), vec![q(3), q(3)]);
    }

    #[test]
    fn greedy_independent_subset() {
        let vs = m(&[&[1, 0], &[2, 0], &[0, 1], &[1, 1]]);
        assert_eq!(independent_subset(&vs, 2), vec![0, 2]);
    }

    #[test]
    fn empty_matrix() {
        assert_eq!(rank(&Vec::new(), 3), 0);
        assert_eq!(kernel(&Vec::new(), 2).len(), 2);
    }
}
