//! Exact p-adic valuations and the square-class group Q_p^* / (Q_p^*)^2.
//!
//! Every class has a canonical representative: `{1, u, p, u*p}` for odd `p`
//! (with `u` the least positive quadratic non-residue) and
//! `{1, 3, 5, 7, 2, 6, 10, 14}` for `p = 2`.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, legendre, strip_prime};
use crate::error::{Error, Result};

/// An element of Q_p^* / (Q_p^*)^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PAdicSquareClass {
    prime: u64,
    /// Parity of the valuation.
    odd_valuation: bool,
    /// Odd p: 0 for a residue, 1 for a non-residue. p = 2: the unit part mod 8.
    unit: u8,
}

impl PAdicSquareClass {
    pub fn identity(prime: u64) -> Self {
        PAdicSquareClass { prime, odd_valuation: false, unit: if prime == 2 { 1 } else { 0 } }
    }

    /// Construct from the parts. For odd `p`, `unit` is 0 (square) or 1
    /// (non-square); for `p = 2` it is one of 1, 3, 5, 7.
    pub fn from_parts(prime: u64, odd_valuation: bool, unit: u8) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        let ok = if prime == 2 { matches!(unit, 1 | 3 | 5 | 7) } else { unit <= 1 };
        if !ok {
            return Err(Error::Parse(format!("unit label {unit} invalid for p = {prime}")));
        }
        Ok(PAdicSquareClass { prime, odd_valuation, unit })
    }

    /// All classes for the prime, in canonical order.
    pub fn all(prime: u64) -> Vec<Self> {
        let units: &[u8] = if prime == 2 { &[1, 3, 5, 7] } else { &[0, 1] };
        let mut out = Vec::new();
        for &odd_valuation in &[false, true] {
            for &unit in units {
                out.push(PAdicSquareClass { prime, odd_valuation, unit });
            }
        }
        out
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn odd_valuation(&self) -> bool {
        self.odd_valuation
    }

    /// The unit label: residue bit for odd p, unit part mod 8 for p = 2.
    pub fn unit_label(&self) -> u8 {
        self.unit
    }

    pub fn is_identity(&self) -> bool {
        !self.odd_valuation && self.unit == if self.prime == 2 { 1 } else { 0 }
    }

    pub fn is_unit_class(&self) -> bool {
        !self.odd_valuation
    }

    /// Canonical positive integer representative.
    pub fn representative(&self) -> BigInt {
        let unit = if self.prime == 2 {
            BigInt::from(self.unit)
        } else if self.unit == 0 {
            BigInt::from(1)
        } else {
            BigInt::from(least_non_residue(self.prime))
        };
        if self.odd_valuation {
            unit * self.prime
        } else {
            unit
        }
    }
}

impl Mul for PAdicSquareClass {
    type Output = PAdicSquareClass;

    fn mul(self, rhs: PAdicSquareClass) -> PAdicSquareClass {
        assert_eq!(self.prime, rhs.prime, "square classes over different primes");
        let unit = if self.prime == 2 {
            ((self.unit as u32 * rhs.unit as u32) % 8) as u8
        } else {
            self.unit ^ rhs.unit
        };
        PAdicSquareClass { prime: self.prime, odd_valuation: self.odd_valuation ^ rhs.odd_valuation, unit }
    }
}

impl fmt::Display for PAdicSquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.representative())
    }
}

/// Least positive quadratic non-residue modulo an odd prime.
pub fn least_non_residue(p: u64) -> u64 {
    (2..p).find(|&a| legendre(a as i64, p) == -1).expect("odd prime has a non-residue")
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// p-adic valuation of a nonzero rational.
pub fn valuation(x: &BigRational, p: u64) -> Result<i64> {
    check_prime(p)?;
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let (vn, _) = strip_prime(x.numer(), p);
    let (vd, _) = strip_prime(x.denom(), p);
    Ok(vn as i64 - vd as i64)
}

/// p-adic valuation of a nonzero integer.
pub fn valuation_int(x: &BigInt, p: u64) -> Result<i64> {
    valuation(&BigRational::from_integer(x.clone()), p)
}

/// Residue of `num / den` modulo `m` for a unit (num, den coprime to p).
fn unit_residue(num: &BigInt, den: &BigInt, m: u64) -> u64 {
    let bm = BigInt::from(m);
    let n = num.mod_floor(&bm).to_u64().unwrap();
    let d = den.mod_floor(&bm).to_u64().unwrap();
    // den^2 is a square, so num/den and num*den share a square class
    ((n as u128 * d as u128) % m as u128) as u64
}

/// Square class of a nonzero rational in Q_p^* / (Q_p^*)^2.
pub fn square_class(x: &BigRational, p: u64) -> Result<PAdicSquareClass> {
    check_prime(p)?;
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let (vn, un) = strip_prime(x.numer(), p);
    let (vd, ud) = strip_prime(x.denom(), p);
    let odd_valuation = (vn + vd) % 2 == 1;
    let unit = if p == 2 {
        unit_residue(&un, &ud, 8) as u8
    } else {
        let r = unit_residue(&un, &ud, p);
        if legendre(r as i64, p) == 1 {
            0
        } else {
            1
        }
    };
    Ok(PAdicSquareClass { prime: p, odd_valuation, unit })
}

pub fn square_class_int(x: &BigInt, p: u64) -> Result<PAdicSquareClass> {
    square_class(&BigRational::from_integer(x.clone()), p)
}

/// True iff `x` is a square in Q_p.
pub fn is_square(x: &BigRational, p: u64) -> Result<bool> {
    Ok(square_class(x, p)?.is_identity())
}

/// Sign-preserving helper: the rational `num/den` from small integers.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// True iff the rational has no p in its denominator.
pub fn is_p_integral(x: &BigRational, p: u64) -> bool {
    x.is_zero() || strip_prime(x.denom(), p).0 == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn sq_mod(k: u32, p: u64) -> HashSet<u64> {
        let m = p.pow(k);
        (1..m).filter(|x| x % p != 0).map(|x| (x * x) % m).collect()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&rat(8, 1), 2).unwrap(), 3);
        assert_eq!(valuation(&rat(7, 3), 3).unwrap(), -1);
        assert_eq!(valuation(&rat(-68, 1), 2).unwrap(), 2);
        assert!(matches!(valuation(&rat(0, 1), 5), Err(Error::ZeroValuation)));
        assert!(matches!(valuation(&rat(3, 1), 4), Err(Error::NotPrime(4))));
    }

    #[test]
    fn square_class_examples() {
        let c = square_class(&rat(17, 1), 2).unwrap();
        assert!(c.is_identity());
        assert_eq!(c.unit_label(), 1);

        // oracle: squares of units mod 3
        let squares = sq_mod(1, 3);
        assert!(!squares.contains(&(5 % 3)));
        let c = square_class(&rat(5, 1), 3).unwrap();
        assert!(!c.odd_valuation());
        assert_eq!(c.unit_label(), 1);

        // 7/3 = 3 * (7/9): odd valuation, unit class of 7
        let c = square_class(&rat(7, 3), 3).unwrap();
        assert!(c.odd_valuation());
        let residue = squares.contains(&(7 % 3));
        assert_eq!(c.unit_label() == 0, residue);
        assert_eq!(c.representative(), BigInt::from(3));
        assert!(square_class(&rat(0, 1), 3).is_err());
    }

    #[test]
    fn is_square_examples() {
        assert!(is_square(&rat(9, 1), 5).unwrap());
        assert!(!is_square(&rat(2, 1), 2).unwrap());
        // oracle: -1 = 7 mod 8 is not a square mod 8
        assert!(!sq_mod(3, 2).contains(&7));
        assert!(!is_square(&rat(-1, 1), 2).unwrap());
        assert!(is_square(&rat(-7, 1), 2).unwrap());
    }

    #[test]
    fn brute_force_unit_classes_match_hensel() {
        // A unit is a square in Z_p iff it is a square mod p^k for k large enough
        // (k = 1 for odd p, k = 3 for p = 2).
        for (p, k) in [(2u64, 5u32), (3, 3), (5, 2), (23, 2)] {
            let m = p.pow(k);
            let squares = sq_mod(k, p);
            for u in (1..m).filter(|u| u % p != 0) {
                let expect = squares.contains(&u);
                assert_eq!(is_square(&rat(u as i64, 1), p).unwrap(), expect, "u={u} p={p}");
            }
        }
    }

    #[test]
    fn representatives_are_canonical() {
        let reps: Vec<_> = PAdicSquareClass::all(2).iter().map(|c| c.representative()).collect();
        let expect: Vec<BigInt> = [1, 3, 5, 7, 2, 6, 10, 14].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(reps, expect);
        let reps: Vec<_> = PAdicSquareClass::all(7).iter().map(|c| c.representative()).collect();
        let expect: Vec<BigInt> = [1, 3, 7, 21].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(reps, expect);
        for p in [2u64, 3, 5, 7, 23] {
            for c in PAdicSquareClass::all(p) {
                let back = square_class(&BigRational::from_integer(c.representative()), p).unwrap();
                assert_eq!(back, c);
            }
        }
    }

    fn nonzero_rat() -> impl Strategy<Value = BigRational> {
        (-5000i64..5000, 1i64..500)
            .prop_filter("nonzero", |(n, _)| *n != 0)
            .prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn class_ignores_square_factors(x in nonzero_rat(), y in nonzero_rat(), pi in 0usize..5) {
            let p = [2u64, 3, 5, 7, 23][pi];
            let xy2 = &x * &y * &y;
            prop_assert_eq!(square_class(&xy2, p).unwrap(), square_class(&x, p).unwrap());
        }

        #[test]
        fn class_is_multiplicative(x in nonzero_rat(), y in nonzero_rat(), pi in 0usize..5) {
            let p = [2u64, 3, 5, 7, 23][pi];
            let lhs = square_class(&x, p).unwrap() * square_class(&y, p).unwrap();
            prop_assert_eq!(lhs, square_class(&(&x * &y), p).unwrap());
        }
    }

    #[test]
    fn class_counts_over_a_sample() {
        for p in [2u64, 3, 5, 23] {
            let mut seen = HashSet::new();
            for n in 1..400i64 {
                for s in [1, -1] {
                    seen.insert(square_class(&rat(s * n, 1), p).unwrap());
                }
            }
            assert_eq!(seen.len(), if p == 2 { 8 } else { 4 }, "p = {p}");
        }
    }

    #[test]
    fn group_laws() {
        for p in [2u64, 3] {
            let all = PAdicSquareClass::all(p);
            for &a in &all {
                assert!((a * a).is_identity());
                for &b in &all {
                    assert_eq!(a * b, b * a);
                    for &c in &all {
                        assert_eq!((a * b) * c, a * (b * c));
                    }
                }
            }
        }
    }
}
