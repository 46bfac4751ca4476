//! Exact elimination over the rationals.

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Positive semidefiniteness of a symmetric matrix by symmetric Gaussian
/// elimination (LDLᵀ without pivoting). A zero pivot is only acceptable if
/// its whole remaining row vanishes.
pub fn is_psd(m: &[Vec<Rational>]) -> bool {
    let n = m.len();
    let mut a: Matrix = m.to_vec();
    for i in 0..n {
        let pivot = a[i][i].clone();
        if pivot.is_negative() {
            return false;
        }
        if pivot.is_zero() {
            if a[i][i + 1..].iter().any(|v| !v.is_zero()) {
                return false;
            }
            continue;
        }
        for j in i + 1..n {
            if a[j][i].is_zero() {
                continue;
            }
            let factor = &a[j][i] / &pivot;
            let (top, bottom) = a.split_at_mut(j);
            let (src, dst) = (&top[i], &mut bottom[0]);
            for (d, s) in dst.iter_mut().zip(src).skip(i + 1) {
                *d = &*d - &factor * s;
            }
            dst[i] = Rational::zero();
        }
    }
    true
}

/// Reduced row echelon form and the pivot column of each nonzero row.
pub fn rref(m: &[Vec<Rational>]) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (d, s) in row.iter_mut().zip(&pivot_row) {
                    *d = &*d - &factor * s;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    rref(m).1.len()
}

/// Solves `a·x = b` for square nonsingular `a`.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let augmented: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, v)| row.iter().cloned().chain(std::iter::once(v.clone())).collect())
        .collect();
    let (r, pivots) = rref(&augmented);
    if pivots.len() != n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    Some(r.into_iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&v| q(v, 1)).collect()).collect()
    }

    #[test]
    fn psd_examples() {
        assert!(!is_psd(&m(&[&[1, 2], &[2, 1]])));
        assert!(is_psd(&m(&[&[0, 0], &[0, 0]])));
        assert!(is_psd(&m(&[&[1, 1], &[1, 1]])));
        assert!(!is_psd(&m(&[&[0, 1], &[1, 5]])));
        assert!(!is_psd(&m(&[&[-1]])));
        assert!(is_psd(&m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]])));
    }

    #[test]
    fn rank_and_solve() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])), 3);
        let x = solve(&m(&[&[1, 1], &[1, -1]]), &[q(3, 1), q(1, 1)]).unwrap();
        assert_eq!(x, vec![q(2, 1), q(1, 1)]);
        assert!(solve(&m(&[&[1, 1], &[2, 2]]), &[q(1, 1), q(2, 1)]).is_none());
    }
}
