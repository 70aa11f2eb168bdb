//! Exact dense linear algebra: reduced row echelon forms, rank and kernels.
//!
//! Over ℚ the forward sweep is fraction-free (Bareiss) on an integer matrix;
//! over prime fields it is ordinary Gauss-Jordan.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::{Fp, Scalar, BIG_PRIME_1, BIG_PRIME_2, Q};

pub type Matrix<T> = Vec<Vec<T>>;

fn width<T>(rows: &[Vec<T>]) -> usize {
    rows.first().map(|r| r.len()).unwrap_or(0)
}

/// In-place reduced row echelon form; returns the pivot columns.
pub fn gauss_jordan<T: Scalar>(rows: &mut Vec<Vec<T>>) -> Vec<usize> {
    let ncols = width(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero_strict()) else {
            continue;
        };
        rows.swap(r, p);
        let Some(inv) = rows[r][c].inverse() else {
            // zero divisor over a residue ring; the caller reruns after a split
            return pivots;
        };
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Fraction-free forward elimination on the integer images of the rows,
/// then back substitution to the reduced echelon form over ℚ.
pub fn bareiss_rational(rows: &mut Vec<Vec<Q>>) -> Vec<usize> {
    let ncols = width(rows);
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let mut l = BigInt::one();
            for x in row {
                l = l.lcm(x.denom());
            }
            row.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let piv = m[r][c].clone();
        let (head, tail) = m.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            let f = row[c].clone();
            for j in 0..ncols {
                if j < c {
                    continue;
                }
                let v = &piv * &row[j] - &f * &prow[j];
                row[j] = v / &prev;
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    // back substitution in ℚ on the echelon rows
    let mut ech: Vec<Vec<Q>> =
        m.into_iter().map(|row| row.into_iter().map(BigRational::from_integer).collect()).collect();
    for (i, &c) in pivots.iter().enumerate().rev() {
        let inv = ech[i][c].recip();
        for x in ech[i].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = ech[i].clone();
        for row in ech.iter_mut().take(i) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    *rows = ech;
    pivots
}

pub fn rref<T: Scalar>(m: &[Vec<T>]) -> (Matrix<T>, Vec<usize>) {
    let mut rows = m.to_vec();
    let pivots = T::row_echelon(&mut rows);
    (rows, pivots)
}

pub fn rank<T: Scalar>(m: &[Vec<T>]) -> usize {
    rref(m).1.len()
}

/// Basis of the right kernel, one vector per free column, with a 1 in
/// that column.
pub fn nullspace<T: Scalar>(m: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    if m.is_empty() {
        return (0..ncols).map(|j| (0..ncols).map(|i| if i == j { T::one() } else { T::zero() }).collect()).collect();
    }
    let (r, pivots) = rref(m);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![T::zero(); ncols];
        v[free] = T::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -r[i][free].clone();
        }
        out.push(v);
    }
    out
}

/// Left kernel: vectors `u` with `uᵀ M = 0`.
pub fn left_nullspace<T: Scalar>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    nullspace(&transpose(m), m.len())
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Matrix<T> {
    let w = width(m);
    (0..w).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_vec<T: Scalar>(m: &[Vec<T>], v: &[T]) -> Vec<T> {
    m.iter().map(|row| row.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())).collect()
}

fn reduce_rows<const P: u64>(m: &[Vec<Q>]) -> Option<Matrix<Fp<P>>> {
    m.iter().map(|row| row.iter().map(Fp::<P>::from_rational).collect::<Option<Vec<_>>>()).collect()
}

/// Rank of a rational matrix from its images modulo two 62-bit primes. The
/// rank modulo a prime never exceeds the rational rank; the maximum over the
/// primes is returned.
pub fn rank_multimodular(m: &[Vec<Q>]) -> usize {
    let mut best = 0;
    if let Some(a) = reduce_rows::<BIG_PRIME_1>(m) {
        best = best.max(rank(&a));
    }
    if let Some(b) = reduce_rows::<BIG_PRIME_2>(m) {
        best = best.max(rank(&b));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{q, q_frac};

    fn qm(rows: &[&[i64]]) -> Matrix<Q> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn identity_and_zero() {
        let id = qm(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(nullspace(&id, 3).is_empty());
        let z = qm(&[&[0, 0], &[0, 0]]);
        assert_eq!(nullspace(&z, 2).len(), 2);
    }

    #[test]
    fn printed_eta_matrix_kernel() {
        let m = qm(&[
            &[0, 10, 2, 7],
            &[2, 6, 0, 5],
            &[2, 2, 0, 3],
            &[0, 2, 2, 3],
            &[0, 2, 2, 3],
            &[0, 2, 2, 3],
            &[1, 4, 2, 5],
        ]);
        let k = nullspace(&m, 4);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        let scale = q(2) / v[0].clone();
        let v: Vec<Q> = v.iter().map(|x| x * &scale).collect();
        assert_eq!(v, vec![q(2), q(1), q(2), q(-2)]);
    }

    #[test]
    fn rational_and_modular_agree() {
        let m = vec![vec![q_frac(1, 2), q(3), q(-1)], vec![q(1), q(6), q(-2)], vec![q(0), q_frac(7, 3), q(5)]];
        assert_eq!(rank(&m), 2);
        assert_eq!(rank_multimodular(&m), 2);
        for v in nullspace(&m, 3) {
            assert!(mat_vec(&m, &v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn prime_field_kernel() {
        type F = Fp<29>;
        let m: Matrix<F> = vec![vec![F::new(1), F::new(2)], vec![F::new(2), F::new(4)]];
        let k = nullspace(&m, 2);
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&m, &k[0]).iter().all(|x| x.is_zero()));
    }
}
