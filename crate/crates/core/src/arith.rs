//! Small integer number theory: primality, factorization, residue symbols.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Trial division bound for factoring big integers. A composite cofactor
/// below 2^64 left after dividing out every prime below this bound has
/// exactly two prime factors.
const TRIAL_BOUND: u64 = 1 << 22;

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard-Brent rho. `n` must be an odd composite.
fn rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1u64;
        let mut ys = 0u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(r - k).min(128) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn push_factor(out: &mut Vec<(u64, u32)>, p: u64) {
    match out.iter_mut().find(|(q, _)| *q == p) {
        Some(entry) => entry.1 += 1,
        None => out.push((p, 1)),
    }
}

fn factor_rest(n: u64, out: &mut Vec<(u64, u32)>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        push_factor(out, n);
        return;
    }
    let d = rho(n);
    factor_rest(d, out);
    factor_rest(n / d, out);
}

/// Complete factorization of a nonzero `u64`, sorted by prime.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for p in [2u64, 3, 5] {
        while n % p == 0 {
            push_factor(&mut out, p);
            n /= p;
        }
    }
    let mut p = 7u64;
    // wheel-free trial division to a small bound, rho for the rest
    while p <= 1000 && p * p <= n {
        while n % p == 0 {
            push_factor(&mut out, p);
            n /= p;
        }
        p += 2;
    }
    factor_rest(n, &mut out);
    out.sort_unstable();
    out
}

/// Factor the absolute value of a nonzero big integer.
pub fn factor_bigint(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    let mut m = n.abs();
    if m.is_zero() {
        return Err(Error::ZeroValuation);
    }
    if let Some(small) = m.to_u64() {
        return Ok(factor_u64(small));
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    while p < TRIAL_BOUND {
        let bp = BigInt::from(p);
        loop {
            let (q, r) = m.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            push_factor(&mut out, p);
            m = q;
        }
        if let Some(small) = m.to_u64() {
            for (q, e) in factor_u64(small) {
                for _ in 0..e {
                    push_factor(&mut out, q);
                }
            }
            out.sort_unstable();
            return Ok(out);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Err(Error::FactorizationLimit(n.to_string()))
}

/// Primes up to and including `limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Smallest-prime-factor table for fast factoring of many small integers.
#[derive(Clone, Debug)]
pub struct SpfTable {
    spf: Vec<u32>,
}

impl SpfTable {
    pub fn new(limit: u64) -> Self {
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut j = i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        SpfTable { spf }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Factorization of 1 <= n <= limit.
    pub fn factor(&self, mut n: u64) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            n /= p;
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

/// All positive divisors of n >= 1, unsorted. Uses the table when it
/// covers n.
pub fn divisors_u64(n: u64, spf: Option<&SpfTable>) -> Vec<u64> {
    let fac = match spf {
        Some(t) if n <= t.limit() => t.factor(n),
        _ => factor_u64(n),
    };
    let mut out = vec![1u64];
    for (p, e) in fac {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).map_or(true, |sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

pub fn is_square(n: i64) -> bool {
    n >= 0 && {
        let r = isqrt(n as u64);
        r * r == n as u64
    }
}

pub fn is_squarefree(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    factor_u64(n.unsigned_abs()).iter().all(|&(_, e)| e == 1)
}

/// Legendre symbol (a / p) for an odd prime p, as -1, 0 or 1.
pub fn legendre(a: i64, p: u64) -> i32 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol (a / p) for a prime p (including p = 2).
pub fn kronecker_prime(a: i64, p: u64) -> i32 {
    if p == 2 {
        if a % 2 == 0 {
            0
        } else if matches!(a.rem_euclid(8), 1 | 7) {
            1
        } else {
            -1
        }
    } else {
        legendre(a, p)
    }
}

/// Valuation of a nonzero big integer at a prime.
pub fn bigint_valuation(n: &BigInt, p: u64) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let bp = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&bp);
        if !r.is_zero() {
            return Ok(v);
        }
        v += 1;
        m = q;
    }
}

/// Strip the p-part of a nonzero big integer.
pub(crate) fn strip_prime(n: &BigInt, p: u64) -> (u32, BigInt) {
    let bp = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    while !m.is_zero() {
        let (q, r) = m.div_rem(&bp);
        if !r.is_zero() {
            break;
        }
        v += 1;
        m = q;
    }
    (v, m)
}

/// Non-negative residue of a big integer modulo a big positive modulus.
pub(crate) fn modp(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x % m;
    if r.sign() == Sign::Minus {
        r + m
    } else {
        r
    }
}

/// Inverse of `x` modulo `m`, if it exists.
pub(crate) fn inv_mod(x: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = modp(x, m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(modp(&e.x, m))
    } else {
        None
    }
}

/// Extended gcd on i128: returns (g, x, y) with a*x + b*y = g >= 0.
pub(crate) fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_trial_division() {
        for n in 0u64..5000 {
            let naive = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), naive, "n = {n}");
        }
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751));
    }

    #[test]
    fn factors_semiprimes_beyond_trial_bound() {
        let p = 4294967291u64;
        let q = 4294967279u64;
        assert_eq!(factor_u64(p * q), vec![(q, 1), (p, 1)]);
        let big = BigInt::from(p) * BigInt::from(q) * BigInt::from(1u64 << 20) * 3;
        assert_eq!(factor_bigint(&big).unwrap(), vec![(2, 20), (3, 1), (q, 1), (p, 1)]);
    }

    #[test]
    fn rejects_huge_cofactor() {
        let p = BigInt::from(18446744073709551557u64);
        let err = factor_bigint(&(&p * &p)).unwrap_err();
        assert_eq!(err.code(), "FACTORIZATION_LIMIT");
    }

    #[test]
    fn kronecker_at_two() {
        assert_eq!(kronecker_prime(17, 2), 1);
        assert_eq!(kronecker_prime(5, 2), -1);
        assert_eq!(kronecker_prime(-3, 2), -1);
        assert_eq!(kronecker_prime(-7, 2), 1);
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(legendre(3, 7), -1);
    }

    #[test]
    fn spf_and_divisors() {
        let t = SpfTable::new(10_000);
        for n in 1..=10_000u64 {
            assert_eq!(t.factor(n), factor_u64(n), "n = {n}");
            let mut d = divisors_u64(n, Some(&t));
            d.sort_unstable();
            let naive: Vec<u64> = (1..=n).filter(|k| n % k == 0).collect();
            assert_eq!(d, naive);
        }
    }

    #[test]
    fn isqrt_edges() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(15), 3);
        assert_eq!(isqrt(16), 4);
        assert_eq!(isqrt(u64::MAX), 4294967295);
        assert!(is_square(68 * 68));
        assert!(!is_square(-4));
    }
}
