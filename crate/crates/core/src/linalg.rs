//! Exact dense linear algebra: fraction-free determinants and rational solves.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::{Int, Rat};

/// Determinant of a square integer matrix by Bareiss elimination.
///
/// Every intermediate value is itself a minor of the input, so the only
/// divisions are exact. A zero pivot is replaced by swapping in a lower row.
pub fn bareiss_det(matrix: &[Vec<Int>]) -> Int {
    let n = matrix.len();
    if n == 0 {
        return Int::one();
    }
    assert!(
        matrix.iter().all(|r| r.len() == n),
        "bareiss_det needs a square matrix"
    );
    let mut m: Vec<Vec<Int>> = matrix.to_vec();
    let mut sign_flip = false;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign_flip = !sign_flip;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

/// Determinant of a rational matrix: each row is scaled to integers, the
/// integer determinant is taken by [`bareiss_det`], and the scale is divided
/// back out.
pub fn rational_det(matrix: &[Vec<Rat>]) -> Rat {
    let mut scale = Int::one();
    let rows: Vec<Vec<Int>> = matrix
        .iter()
        .map(|row| {
            let l = row.iter().fold(Int::one(), |acc, v| acc.lcm(v.denom()));
            scale *= &l;
            row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect();
    Rat::new(bareiss_det(&rows), scale)
}

/// Solves `A x = b` exactly for a possibly over- or under-determined system.
///
/// Returns `None` when the system is inconsistent. Free variables are set
/// to zero, so a consistent underdetermined system yields one particular
/// solution.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in &mut m[r][c..] {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}
