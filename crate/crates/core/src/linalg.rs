//! Exact rational kernels via fraction-free Gaussian elimination.
//!
//! Rows are cleared of denominators, reduced to echelon form with the
//! Bareiss one-step method (all intermediate divisions are exact over the
//! integers), and kernel vectors are back-substituted in rationals. No
//! tolerance anywhere: a kernel is empty or it is not.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Basis of the null space `{v : M v = 0}` of an `m × n` rational matrix,
/// one vector per free column.
pub fn kernel_basis(matrix: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let m = matrix.len();
    let n = if m == 0 { 0 } else { matrix[0].len() };
    if n == 0 {
        return Vec::new();
    }

    // clear denominators per row; row scaling preserves the kernel
    let mut a: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|row| {
            debug_assert_eq!(row.len(), n);
            let mut l = BigInt::one();
            for x in row {
                l = l.lcm(x.denom());
            }
            row.iter()
                .map(|x| x.numer() * (&l / x.denom()))
                .collect()
        })
        .collect();

    // Bareiss echelon form
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0usize;
    for c in 0..n {
        if r == m {
            break;
        }
        let pivot = match (r..m).find(|&i| !a[i][c].is_zero()) {
            Some(i) => i,
            None => continue,
        };
        a.swap(r, pivot);
        for i in r + 1..m {
            // rows with a zero in the pivot column are rescaled too; the
            // one-step division stays exact only if no row is skipped
            for j in c + 1..n {
                let t = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                let (q, rem) = t.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                a[i][j] = q;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivot_cols.push(c);
        r += 1;
    }

    let is_pivot: Vec<bool> = {
        let mut v = vec![false; n];
        for &c in &pivot_cols {
            v[c] = true;
        }
        v
    };

    // one kernel vector per free column, solved bottom-up
    let mut basis = Vec::new();
    for fc in 0..n {
        if is_pivot[fc] {
            continue;
        }
        let mut v = vec![Scalar::zero(); n];
        v[fc] = Scalar::one();
        for (row, &pc) in pivot_cols.iter().enumerate().rev() {
            let mut acc = Scalar::zero();
            for j in pc + 1..n {
                if !a[row][j].is_zero() && !v[j].is_zero() {
                    acc += Scalar::from_integer(a[row][j].clone()) * &v[j];
                }
            }
            v[pc] = -acc / Scalar::from_integer(a[row][pc].clone());
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    fn mul(m: &[Vec<Scalar>], v: &[Scalar]) -> Vec<Scalar> {
        m.iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Independent oracle: plain rational Gauss-Jordan rank.
    fn rank_oracle(matrix: &[Vec<Scalar>]) -> usize {
        let mut a: Vec<Vec<Scalar>> = matrix.to_vec();
        let m = a.len();
        let n = if m == 0 { 0 } else { a[0].len() };
        let mut rank = 0;
        for c in 0..n {
            if rank == m {
                break;
            }
            if let Some(p) = (rank..m).find(|&i| !a[i][c].is_zero()) {
                a.swap(rank, p);
                let inv = a[rank][c].clone().recip();
                for j in c..n {
                    a[rank][j] = &a[rank][j] * &inv;
                }
                for i in 0..m {
                    if i != rank && !a[i][c].is_zero() {
                        let f = a[i][c].clone();
                        for j in c..n {
                            let s = &a[rank][j] * &f;
                            a[i][j] = &a[i][j] - &s;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn diagonal_kernel() {
        let m = mat(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 2]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![int(0), int(1), int(0)]);
    }

    #[test]
    fn full_rank_has_empty_kernel() {
        let m = mat(&[&[2, 1], &[1, 1]]);
        assert!(kernel_basis(&m).is_empty());
    }

    #[test]
    fn rational_entries() {
        let m = vec![vec![rat(1, 2), rat(1, 3)], vec![rat(3, 2), int(1)]];
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        for v in &k {
            assert!(mul(&m, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn random_matrices_against_rank_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let m = rng.gen_range(1..6);
            let n = rng.gen_range(1..6);
            let a: Vec<Vec<Scalar>> = (0..m)
                .map(|_| (0..n).map(|_| rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect())
                .collect();
            let k = kernel_basis(&a);
            assert_eq!(k.len(), n - rank_oracle(&a), "nullity mismatch");
            for v in &k {
                assert!(mul(&a, v).iter().all(|x| x.is_zero()), "kernel vector fails");
            }
        }
    }
}
