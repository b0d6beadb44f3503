//! Small exact integer matrix routines: Laplacians, fraction-free
//! determinants and Smith normal form.

use crate::ribbon_graph::{RibbonGraph, VertexId};

pub type Matrix = Vec<Vec<i64>>;

/// Full combinatorial Laplacian, rows and columns in canonical vertex order.
/// Parallel edges contribute with multiplicity.
pub fn laplacian_matrix(g: &RibbonGraph) -> Matrix {
    let n = g.num_vertices();
    let mut m = vec![vec![0i64; n]; n];
    for e in g.edges() {
        let (a, b) = g.endpoints(e);
        m[a.0][a.0] += 1;
        m[b.0][b.0] += 1;
        m[a.0][b.0] -= 1;
        m[b.0][a.0] -= 1;
    }
    m
}

/// Laplacian with the row and column of `pivot` removed.
pub fn reduced_laplacian(g: &RibbonGraph, pivot: VertexId) -> Matrix {
    let full = laplacian_matrix(g);
    full.iter()
        .enumerate()
        .filter(|(i, _)| *i != pivot.0)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != pivot.0)
                .map(|(_, &x)| x)
                .collect()
        })
        .collect()
}

/// Bareiss fraction-free elimination.
pub fn determinant(m: &Matrix) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Diagonal of the Smith normal form, nonnegative, each entry dividing the
/// next. Zero entries (for singular input) come last.
pub fn smith_diagonal(m: &Matrix) -> Vec<i64> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut a = m.clone();
    let mut diag = Vec::new();
    for k in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if a[i][j] != 0
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                diag.extend(std::iter::repeat_n(0, rows.min(cols) - k));
                return diag;
            };
            a.swap(k, pi);
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            let p = a[k][k];
            let mut clean = true;
            for i in k + 1..rows {
                let q = a[i][k] / p;
                if q != 0 {
                    let (top, rest) = a.split_at_mut(i);
                    for (x, y) in rest[0][k..].iter_mut().zip(&top[k][k..]) {
                        *x -= q * y;
                    }
                }
                clean &= a[i][k] == 0;
            }
            for j in k + 1..cols {
                let q = a[k][j] / p;
                if q != 0 {
                    for row in a.iter_mut().skip(k) {
                        row[j] -= q * row[k];
                    }
                }
                clean &= a[k][j] == 0;
            }
            if !clean {
                continue;
            }
            // pivot must divide the whole trailing block
            let offender =
                (k + 1..rows).find(|&i| (k + 1..cols).any(|j| a[i][j] % p != 0));
            match offender {
                Some(i) => {
                    let (top, rest) = a.split_at_mut(i);
                    for (x, y) in top[k][k..].iter_mut().zip(&rest[0][k..]) {
                        *x += y;
                    }
                }
                None => {
                    diag.push(p.abs());
                    break;
                }
            }
        }
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&vec![vec![2, -1], vec![-1, 2]]), 3);
        assert_eq!(determinant(&vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(determinant(&vec![vec![1, 2], vec![2, 4]]), 0);
        assert_eq!(
            determinant(&vec![vec![3, -1, -1], vec![-1, 3, -1], vec![-1, -1, 3]]),
            16
        );
    }

    #[test]
    fn smith_of_known_matrices() {
        assert_eq!(smith_diagonal(&vec![vec![2, -1], vec![-1, 2]]), vec![1, 3]);
        // K4 reduced Laplacian: Z/4 x Z/4
        assert_eq!(
            smith_diagonal(&vec![vec![3, -1, -1], vec![-1, 3, -1], vec![-1, -1, 3]]),
            vec![1, 4, 4]
        );
        assert_eq!(smith_diagonal(&vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(smith_diagonal(&vec![vec![4, 0], vec![0, 6]]), vec![2, 12]);
        assert_eq!(smith_diagonal(&vec![vec![0, 0], vec![0, 0]]), vec![0, 0]);
    }
}
