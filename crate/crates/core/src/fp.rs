//! Small dense linear algebra over the prime field F_p, p < 2^32.
//! Used for subspace enumeration and coset bookkeeping; all the exact
//! cohomology arithmetic goes through `linalg` instead.

use alloc::vec::Vec;

/// Inverse of `a` mod `p` by the extended Euclidean algorithm.
/// Requires `a % p != 0`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "not invertible mod p");
    s0.rem_euclid(p as i128) as u64
}

/// In-place reduced row echelon form over F_p; zero rows are dropped.
/// Returns the rank.
pub(crate) fn rref(rows: &mut Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    for col in 0..ncols {
        let Some(src) = (pivot_row..rows.len()).find(|&r| rows[r][col] % p != 0) else {
            continue;
        };
        rows.swap(pivot_row, src);
        let inv = inv_mod(rows[pivot_row][col], p);
        for x in rows[pivot_row].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows.len() {
            if r != pivot_row && rows[r][col] % p != 0 {
                let f = rows[r][col] % p;
                for c in 0..ncols {
                    rows[r][c] = (rows[r][c] + (p - f) * rows[pivot_row][c]) % p;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivot_row);
    pivot_row
}

/// Does `v` lie in the row span of `rows` (assumed in rref)?
pub(crate) fn in_row_span(rows: &[Vec<u64>], v: &[u64], p: u64) -> bool {
    let mut w: Vec<u64> = v.iter().map(|x| x % p).collect();
    for row in rows {
        let lead = row
            .iter()
            .position(|x| *x != 0)
            .expect("rref rows are nonzero");
        if w[lead] != 0 {
            let f = w[lead];
            for c in 0..w.len() {
                w[c] = (w[c] + (p - f) * row[c] % p) % p;
            }
        }
    }
    w.iter().all(|x| *x == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn inverse_mod_small_primes() {
        for p in [3u64, 5, 7, 11, 13] {
            for a in 1..p {
                assert_eq!(a * inv_mod(a, p) % p, 1);
            }
        }
    }

    #[test]
    fn rref_and_span() {
        let mut rows = vec![vec![2u64, 4, 1], vec![1, 2, 2]];
        let rank = rref(&mut rows, 5);
        assert_eq!(rank, 2);
        assert!(in_row_span(&rows, &[3, 6, 3], 5));
        assert!(!in_row_span(&rows, &[0, 1, 0], 5));
    }
}
