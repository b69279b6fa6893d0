//! Exact integer linear algebra.
//!
//! Rank is computed over the rationals by fraction-free (Bareiss) elimination.
//! A checked `i128` pass is tried first; on overflow the same elimination is
//! rerun on arbitrary-precision integers, so the result never depends on the
//! magnitude of the input.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Rank over Q of a list of equal-length integer vectors.
pub fn integer_rank(vectors: &[Vec<i64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let width = vectors[0].len();
    assert!(
        vectors.iter().all(|v| v.len() == width),
        "integer_rank: vectors of unequal length"
    );
    if width == 0 {
        return 0;
    }
    let small: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| x as i128).collect())
        .collect();
    match bareiss_i128(small) {
        Some(rank) => rank,
        None => {
            let big: Vec<Vec<BigInt>> = vectors
                .iter()
                .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            bareiss_big(big)
        }
    }
}

fn bareiss_i128(mut m: Vec<Vec<i128>>) -> Option<usize> {
    let rows = m.len();
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev: i128 = 1;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot_row) = (rank..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col];
        for r in rank + 1..rows {
            let factor = m[r][col];
            for c in col + 1..cols {
                let lhs = m[r][c].checked_mul(pivot)?;
                let rhs = m[rank][c].checked_mul(factor)?;
                m[r][c] = lhs.checked_sub(rhs)? / prev;
            }
            m[r][col] = 0;
        }
        prev = pivot;
        rank += 1;
    }
    Some(rank)
}

fn bareiss_big(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        if rank == rows {
            break;
        }
        // Smallest nonzero pivot keeps the intermediate minors short.
        let Some(pivot_row) = (rank..rows)
            .filter(|&r| !m[r][col].is_zero())
            .min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()))
        else {
            continue;
        };
        m.swap(rank, pivot_row);
        let (head, tail) = m.split_at_mut(rank + 1);
        let pivot_line = &head[rank];
        let pivot = pivot_line[col].clone();
        for line in tail.iter_mut() {
            if line[col].is_zero() {
                for c in col + 1..cols {
                    if !line[c].is_zero() {
                        line[c] = &line[c] * &pivot / &prev;
                    }
                }
                continue;
            }
            let factor = std::mem::take(&mut line[col]);
            for c in col + 1..cols {
                let v = &line[c] * &pivot - &pivot_line[c] * &factor;
                line[c] = v / &prev;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn edge_cases() {
        assert_eq!(integer_rank(&[]), 0);
        assert_eq!(integer_rank(&[vec![1, 0], vec![0, 1], vec![1, 1]]), 2);
        assert_eq!(integer_rank(&[vec![2, 4], vec![1, 2]]), 1);
        assert_eq!(integer_rank(&[vec![0, 0, 0]]), 0);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        // 12x12 minors of entries near 10^6 exceed the i128 range.
        let n = 12;
        let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as i64 % 1_000_000
        };
        let mut m: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
        m[5] = m[1].iter().zip(&m[3]).map(|(a, b)| a - 3 * b).collect();
        let small: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        assert_eq!(bareiss_i128(small), None);
        assert_eq!(integer_rank(&m), n - 1);
        assert_eq!(rank_mod_p(&m, 1_000_000_007), n - 1);
    }

    fn rank_mod_p(rows: &[Vec<i64>], p: i64) -> usize {
        let mut m: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| r.iter().map(|x| x.rem_euclid(p)).collect())
            .collect();
        let cols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
                continue;
            };
            m.swap(rank, piv);
            let inv = modpow(m[rank][c], p - 2, p);
            for r in 0..m.len() {
                if r != rank && m[r][c] != 0 {
                    let f = m[r][c] * inv % p;
                    for k in 0..cols {
                        m[r][k] = (m[r][k] - f * m[rank][k]).rem_euclid(p);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn modpow(mut b: i64, mut e: i64, p: i64) -> i64 {
        let mut acc = 1;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    }

    proptest! {
        // Rank over Q is an upper bound for rank mod p, and for small entries
        // a large prime almost surely attains it.
        #[test]
        fn matches_rank_mod_large_prime(rows in prop::collection::vec(prop::collection::vec(-3i64..4, 5), 0..7)) {
            let q = integer_rank(&rows);
            let p = rank_mod_p(&rows, 1_000_000_007);
            prop_assert!(p <= q);
            prop_assert_eq!(p, q);
        }

        #[test]
        fn invariant_under_row_duplication(rows in prop::collection::vec(prop::collection::vec(-50i64..50, 4), 1..6)) {
            let mut doubled = rows.clone();
            doubled.extend(rows.iter().cloned());
            prop_assert_eq!(integer_rank(&rows), integer_rank(&doubled));
        }
    }
}
