//! 4-ranks of fundamental discriminants from the Rédei matrix of their
//! prime discriminant factorization.

use super::quadratic::{check_d, fundamental_of_d, rank4_of_d_with};
use super::DEFAULT_DISC_LIMIT;
use crate::arith::{factor_u64, is_squarefree, kronecker_prime, SpfTable};
use crate::error::{Error, Result};

fn is_fundamental(disc: i64) -> bool {
    match disc.rem_euclid(16) {
        r if r % 4 == 1 => disc != 1 && is_squarefree(disc),
        8 | 12 => {
            let m = disc / 4;
            m.rem_euclid(4) != 1 && is_squarefree(m)
        }
        _ => false,
    }
}

/// The prime discriminants p* with Δ = Π p*, paired with their primes.
pub fn prime_discriminants(disc: i64) -> Result<Vec<(u64, i64)>> {
    if !is_fundamental(disc) {
        return Err(Error::NotFundamental(disc));
    }
    let mut out = Vec::new();
    let mut rest = disc;
    for (p, _) in factor_u64(disc.unsigned_abs()) {
        if p == 2 {
            continue;
        }
        let star = if p % 4 == 1 { p as i64 } else { -(p as i64) };
        out.push((p, star));
        rest /= star;
    }
    if rest != 1 {
        // rest is −4, 8 or −8
        out.insert(0, (2, rest));
    }
    Ok(out)
}

fn f2_rank(mut rows: Vec<u64>) -> u32 {
    let mut rank = 0;
    for bit in 0..64 {
        let Some(i) = (rank as usize..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank as usize, i);
        let pivot = rows[rank as usize];
        for (k, r) in rows.iter_mut().enumerate() {
            if k != rank as usize && *r >> bit & 1 == 1 {
                *r ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}

/// rk₄(C_Δ) = t − 1 − rank of the t×t matrix with off-diagonal entries
/// [(d_j / p_i) = −1] and diagonal making every row sum to zero.
pub fn redei_rank4(disc: i64) -> Result<u32> {
    let parts = prime_discriminants(disc)?;
    let t = parts.len();
    let rows = (0..t)
        .map(|i| {
            let p = parts[i].0;
            let mut row = 0u64;
            for (j, &(_, dj)) in parts.iter().enumerate() {
                if j != i && kronecker_prime(dj, p) == -1 {
                    row ^= 1 << j | 1 << i;
                }
            }
            row
        })
        .collect();
    Ok(t as u32 - 1 - f2_rank(rows))
}

/// Cross-check the Rédei 4-rank against the class-group computation for
/// every admissible d with 0 < |d| ≤ limit.
pub fn redei_gate(limit: i64) -> Result<()> {
    let spf = SpfTable::new((4 * limit / 3 + 1) as u64);
    for d in (-limit..=limit).filter(|&d| check_d(d).is_ok()) {
        let oracle = rank4_of_d_with(d, DEFAULT_DISC_LIMIT, Some(&spf))?;
        let redei = redei_rank4(fundamental_of_d(d))?;
        if oracle != redei {
            return Err(Error::RedeiGateFailed { d, oracle, redei });
        }
    }
    Ok(())
}
