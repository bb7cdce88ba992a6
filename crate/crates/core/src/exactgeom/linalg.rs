//! Exact integer linear algebra: rank and determinant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Rank over the rationals, by fraction-free row reduction.
///
/// Rows are reduced by cross-multiplication and divided by their content
/// after every step, so entries stay small on the inputs seen here.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut mat: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let cols = mat.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        if r == mat.len() {
            break;
        }
        let Some(p) = (r..mat.len()).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let pivot_row = mat[r].clone();
        let pivot = pivot_row[col].clone();
        for row in mat.iter_mut().skip(r + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for j in col..cols {
                row[j] = &pivot * &row[j] - &factor * &pivot_row[j];
            }
            normalize_row(row);
        }
        r += 1;
    }
    r
}

fn normalize_row(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Determinant of a square matrix by Bareiss elimination.
pub fn determinant(mat: &[Vec<BigInt>]) -> BigInt {
    let n = mat.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = mat.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Determinant of a small `i64` matrix; used by the unimodularity check.
/// Bareiss intermediates are minors, so they are bounded by Hadamard's bound.
pub fn determinant_i64(mat: &[Vec<i64>]) -> i128 {
    let n = mat.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = mat
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    /// Cofactor expansion, independent of the elimination routines.
    fn laplace(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut acc = BigInt::zero();
        for c in 0..n {
            if m[0][c].is_zero() {
                continue;
            }
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != c)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][c] * laplace(&minor);
            if c % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == k {
                out.push((0..n).filter(|&i| mask >> i & 1 == 1).collect());
            }
        }
        out
    }

    /// Largest k with a nonzero k×k minor.
    fn rank_by_minors(m: &[Vec<BigInt>]) -> usize {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        for k in (1..=rows.min(cols)).rev() {
            for rs in subsets(rows, k) {
                for cs in subsets(cols, k) {
                    let sub: Vec<Vec<BigInt>> = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect())
                        .collect();
                    if !laplace(&sub).is_zero() {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(&big(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank(&big(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&big(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&big(&[&[0, 1, 1], &[0, 2, 2], &[1, 0, 1]])), 2);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&big(&[&[1, 1], &[-1, 1]])), BigInt::from(2));
        assert_eq!(determinant(&big(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(determinant_i64(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(
            determinant_i64(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 4]]),
            24
        );
    }

    fn small_matrix(max_dim: usize) -> impl Strategy<Value = Vec<Vec<BigInt>>> {
        (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
            proptest::collection::vec(
                proptest::collection::vec((-2i64..=2).prop_map(BigInt::from), c),
                r,
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rank_matches_minor_expansion(m in small_matrix(6)) {
            prop_assert_eq!(rank(&m), rank_by_minors(&m));
        }

        #[test]
        fn determinant_matches_laplace(n in 1usize..=6, seed in proptest::collection::vec(-3i64..=3, 36)) {
            let m: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| BigInt::from(seed[i * 6 + j])).collect()).collect();
            prop_assert_eq!(determinant(&m), laplace(&m));
            let small: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| seed[i * 6 + j]).collect()).collect();
            prop_assert_eq!(BigInt::from(determinant_i64(&small)), laplace(&m));
        }
    }

    #[test]
    fn rank_matches_minor_expansion_up_to_8x8() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..12 {
            let r = rng.gen_range(1..=8);
            let c = rng.gen_range(1..=8);
            let rank_cap = rng.gen_range(1..=r.min(c));
            // Low-rank products exercise the deficient cases.
            let left: Vec<Vec<i64>> = (0..r)
                .map(|_| (0..rank_cap).map(|_| rng.gen_range(-2..=2)).collect())
                .collect();
            let right: Vec<Vec<i64>> = (0..rank_cap)
                .map(|_| (0..c).map(|_| rng.gen_range(-2..=2)).collect())
                .collect();
            let m: Vec<Vec<BigInt>> = (0..r)
                .map(|i| {
                    (0..c)
                        .map(|j| {
                            BigInt::from(
                                (0..rank_cap).map(|k| left[i][k] * right[k][j]).sum::<i64>(),
                            )
                        })
                        .collect()
                })
                .collect();
            assert_eq!(rank(&m), rank_by_minors(&m));
        }
    }
}
