//! Per-prime decision whether the spinor norm image θ_p(Λ_p) contains all
//! p-adic units, and the aggregate one-spinor-genus verdict.
//!
//! The engine is one-sided: it only ever certifies containment, with the
//! rule that justified it. Anything it cannot certify is `Unknown`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{factor_bigint, strip_prime};
use crate::error::Result;
use crate::lattice::{jordan_decompose, orthogonal_factor_scan, GramMatrix, JordanDecomposition, PatternTag};
use crate::serial::bigint_json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    #[serde(rename = "contains")]
    ContainsUnits,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reason {
    TwoH,
    UnitTriple,
    UnitPairPlusNext,
    OddEqualScalePair,
    DiscriminantBound,
    UnimodularRank3,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinorVerdict {
    pub prime: u64,
    pub answer: Answer,
    pub reason: Option<Reason>,
}

impl SpinorVerdict {
    fn contains(prime: u64, reason: Reason) -> Self {
        SpinorVerdict { prime, answer: Answer::ContainsUnits, reason: Some(reason) }
    }

    fn unknown(prime: u64) -> Self {
        SpinorVerdict { prime, answer: Answer::Unknown, reason: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    OneProperSpinorGenus,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusVerdict {
    pub dimension: usize,
    #[serde(with = "bigint_json")]
    pub det: BigInt,
    pub definite: bool,
    pub verdicts: Vec<SpinorVerdict>,
    pub conclusion: Conclusion,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hint: Option<String>,
}

/// Threshold of the odd-prime bound: v_p(D) below this forces containment.
pub fn odd_bound(n: usize) -> u64 {
    (n * (n - 1) / 2) as u64
}

/// Threshold at p = 2 for definite spaces.
pub fn definite_two_bound(n: usize) -> u64 {
    (n * (n - 3) + 2 * ((n + 1) / 2)) as u64
}

/// Threshold at p = 2 for indefinite spaces.
pub fn indefinite_two_bound(n: usize) -> u64 {
    (n * (n - 1)) as u64
}

/// Primes dividing 2·det.
pub fn relevant_primes(g: &GramMatrix) -> Result<Vec<u64>> {
    let mut primes: Vec<u64> = factor_bigint(&g.determinant())?.into_iter().map(|(p, _)| p).collect();
    if !primes.contains(&2) {
        primes.push(2);
    }
    primes.sort_unstable();
    Ok(primes)
}

/// Containment test at the prime of `j`. `n` and `det` describe the whole
/// lattice; the bound rules apply only for n ≥ 3.
pub fn contains_units(j: &JordanDecomposition, definite: bool, n: usize, det: &BigInt) -> SpinorVerdict {
    let p = j.prime();
    let tags = orthogonal_factor_scan(j);
    let ordered = [
        (PatternTag::UnitTripleSameScale, Reason::UnitTriple),
        (PatternTag::UnitPairPlusNext, Reason::UnitPairPlusNext),
        (PatternTag::TwoH, Reason::TwoH),
        (PatternTag::OddEqualScalePair, Reason::OddEqualScalePair),
    ];
    if let Some(&(_, reason)) = ordered.iter().find(|(t, _)| tags.contains(t)) {
        return SpinorVerdict::contains(p, reason);
    }
    if n >= 3 {
        let v = strip_prime(det, p).0 as u64;
        let bound = match (p, definite) {
            (2, true) => definite_two_bound(n),
            (2, false) => indefinite_two_bound(n),
            _ => odd_bound(n),
        };
        if v < bound {
            return SpinorVerdict::contains(p, Reason::DiscriminantBound);
        }
        let unimodular = j.rank_at(0);
        if (p != 2 && unimodular >= 2) || (v == 0 && unimodular >= 3) {
            return SpinorVerdict::contains(p, Reason::UnimodularRank3);
        }
    }
    SpinorVerdict::unknown(p)
}

/// Decide whether the genus of the lattice has a single proper spinor genus.
pub fn one_spinor_genus(g: &GramMatrix, definite: bool) -> Result<GenusVerdict> {
    let n = g.dim();
    let det = g.determinant();
    let primes = relevant_primes(g)?;
    if n < 3 {
        return Ok(GenusVerdict {
            dimension: n,
            det,
            definite,
            verdicts: primes.into_iter().map(SpinorVerdict::unknown).collect(),
            conclusion: Conclusion::Inconclusive,
            hint: Some("binary lattices are decided by their class group: use quadratic --d".into()),
        });
    }
    let verdicts = primes
        .into_iter()
        .map(|p| Ok(contains_units(&jordan_decompose(g, p)?, definite, n, &det)))
        .collect::<Result<Vec<_>>>()?;
    let conclusion = if verdicts.iter().all(|v| v.answer == Answer::ContainsUnits) {
        Conclusion::OneProperSpinorGenus
    } else {
        Conclusion::Inconclusive
    };
    Ok(GenusVerdict { dimension: n, det, definite, verdicts, conclusion, hint: None })
}
