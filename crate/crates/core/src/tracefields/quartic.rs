//! Totally ramified quartic extensions of Q₂ with 9 ≤ v₂(D) ≤ 11: the
//! predicted diagonal forms of Λ₂ and their verification on the 36 fields.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::{trace_gram, NumberFieldInput};
use crate::error::{Error, Result};
use crate::lattice::{jordan_decompose, orthogonal_factor_scan, GramMatrix, JordanDecomposition, PatternTag};
use crate::padic::{rat, valuation, valuation_int};
use crate::poly::format_poly;
use crate::serial::rational_to_string;

/// The 36 generating polynomials (ascending coefficients) with c = v₂(D).
pub const QUARTIC_TABLE: [([i64; 5], u32); 36] = [
    ([2, 0, 6, 0, 1], 9),
    ([2, 0, -2, 0, 1], 9),
    ([10, 0, 6, 0, 1], 9),
    ([10, 0, 2, 0, 1], 9),
    ([-2, 0, 2, 0, 1], 9),
    ([-2, 0, -2, 0, 1], 9),
    ([6, 0, 2, 0, 1], 9),
    ([6, 0, -2, 0, 1], 9),
    ([-9, 0, 2, 0, 1], 10),
    ([-1, 0, 2, 0, 1], 10),
    ([-9, 0, 6, 0, 1], 10),
    ([-1, 0, 6, 0, 1], 10),
    ([3, 0, -6, 0, 1], 10),
    ([3, 0, 6, 0, 1], 10),
    ([3, 0, -2, 0, 1], 10),
    ([3, 0, 2, 0, 1], 10),
    ([2, 0, 12, 0, 1], 11),
    ([18, 0, 4, 0, 1], 11),
    ([18, 0, 12, 0, 1], 11),
    ([10, 0, 4, 0, 1], 11),
    ([10, 0, 12, 0, 1], 11),
    ([14, 0, 4, 0, 1], 11),
    ([6, 0, 4, 0, 1], 11),
    ([6, 0, 12, 0, 1], 11),
    ([6, 0, 0, 0, 1], 11),
    ([22, 0, 0, 0, 1], 11),
    ([14, 0, 0, 0, 1], 11),
    ([30, 0, 0, 0, 1], 11),
    ([26, 0, 0, 0, 1], 11),
    ([10, 0, 0, 0, 1], 11),
    ([18, 0, 0, 0, 1], 11),
    ([2, 0, 0, 0, 1], 11),
    ([10, 8, 0, 0, 1], 11),
    ([6, 8, 0, 0, 1], 11),
    ([14, 8, 0, 0, 1], 11),
    ([22, 8, 8, 0, 1], 11),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum QuarticCase {
    /// x⁴ + 2ax² + b with v₂(a) = 0, v₂(b) = 1.
    #[serde(rename = "i")]
    I,
    /// v₂(a) = 0, v₂(b) = 0.
    #[serde(rename = "ii")]
    II,
    /// v₂(a) = 1, v₂(b) = 1.
    #[serde(rename = "iii")]
    III,
    /// a = 0, v₂(b) = 1.
    #[serde(rename = "iv")]
    IV,
    /// x⁴ + 8x + 2b with b odd.
    #[serde(rename = "EIGHT_X")]
    EightX,
    /// x⁴ + 8x² + 8x + 22.
    #[serde(rename = "SPECIAL")]
    Special,
}

impl fmt::Display for QuarticCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuarticCase::I => "(i)",
            QuarticCase::II => "(ii)",
            QuarticCase::III => "(iii)",
            QuarticCase::IV => "(iv)",
            QuarticCase::EightX => "EIGHT_X",
            QuarticCase::Special => "SPECIAL",
        })
    }
}

/// 2^scale·u for a rational 2-adic unit u, or 2^scale·ℍ when `unit` is None.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredictedBlock {
    pub scale: u32,
    pub unit: Option<BigRational>,
}

impl Serialize for PredictedBlock {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("scale", &self.scale)?;
        match &self.unit {
            Some(u) => {
                m.serialize_entry("kind", "unit")?;
                m.serialize_entry("value", &rational_to_string(u))?;
            }
            None => m.serialize_entry("kind", "hyperbolic")?,
        }
        m.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuarticPrediction {
    pub case: QuarticCase,
    pub blocks: Vec<PredictedBlock>,
}

impl QuarticPrediction {
    pub fn scale_sum(&self) -> u64 {
        self.blocks.iter().map(|b| if b.unit.is_some() { b.scale as u64 } else { 2 * b.scale as u64 }).sum()
    }

    /// Whether every displayed unit value really is a 2-adic unit.
    pub fn units_valid(&self) -> bool {
        self.blocks.iter().filter_map(|b| b.unit.as_ref()).all(|u| !u.is_zero() && valuation(u, 2).ok() == Some(0))
    }

    /// Integer Gram matrix of the predicted form; u = m/n is replaced by mn,
    /// which lies in the same square class.
    pub fn gram(&self) -> GramMatrix {
        let n: usize = self.blocks.iter().map(|b| if b.unit.is_some() { 1 } else { 2 }).sum();
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        let mut at = 0;
        for b in &self.blocks {
            let s = BigInt::one() << b.scale;
            match &b.unit {
                Some(u) => {
                    rows[at][at] = &s * u.numer() * u.denom();
                    at += 1;
                }
                None => {
                    rows[at][at + 1] = s.clone();
                    rows[at + 1][at] = s;
                    at += 2;
                }
            }
        }
        GramMatrix::new(rows).expect("predicted blocks are nonsingular")
    }
}

fn v2(x: i64) -> Option<u32> {
    (x != 0).then(|| x.trailing_zeros())
}

/// Case and predicted diagonal form of Λ₂ for the recognized shapes.
pub fn quartic_wild2_classify(poly: &[BigInt]) -> Result<QuarticPrediction> {
    let name = format_poly(poly);
    let unrecognized = || Error::UnrecognizedQuartic(name.clone());
    let c: Vec<i64> = poly.iter().map(|x| x.to_i64()).collect::<Option<_>>().ok_or_else(unrecognized)?;
    if c.len() != 5 || c[4] != 1 {
        return Err(unrecognized());
    }
    let unit = |scale: u32, q: BigRational| PredictedBlock { scale, unit: Some(q) };
    let hyp = |scale: u32| PredictedBlock { scale, unit: None };
    let one = || rat(1, 1);
    if c == [22, 8, 8, 0, 1] {
        let blocks = vec![unit(2, one()), unit(3, rat(-3, 1)), unit(3, one()), unit(3, rat(-773, 3))];
        return Ok(QuarticPrediction { case: QuarticCase::Special, blocks });
    }
    if c[1] == 8 && c[2] == 0 && c[3] == 0 && c[0] % 2 == 0 && v2(c[0]) == Some(1) {
        let b = c[0] / 2;
        let blocks = vec![unit(2, one()), unit(3, rat(-b, 1)), hyp(3)];
        return Ok(QuarticPrediction { case: QuarticCase::EightX, blocks });
    }
    if c[1] != 0 || c[3] != 0 || c[2] % 2 != 0 {
        return Err(unrecognized());
    }
    let (a, b) = (c[2] / 2, c[0]);
    // (a²b − b²)/(2a)
    let last = || rat(a * a * b - b * b, 2 * a);
    let (case, blocks) = match (v2(a), v2(b)) {
        (None, Some(1)) => (QuarticCase::IV, vec![unit(2, one()), unit(3, rat(-b, 2)), hyp(3)]),
        (Some(0), Some(1)) => (QuarticCase::I, vec![unit(2, one()), unit(2, rat(a * a - b, 1)), unit(2, rat(-a, 1)), unit(3, last())]),
        (Some(0), Some(0)) => (QuarticCase::II, vec![unit(2, one()), unit(3, rat(a * a - b, 2)), unit(2, rat(-a, 1)), unit(3, last())]),
        (Some(1), Some(1)) => (QuarticCase::III, vec![unit(2, one()), unit(3, rat(a * a - b, 2)), unit(3, rat(-a, 2)), unit(3, last())]),
        _ => return Err(unrecognized()),
    };
    Ok(QuarticPrediction { case, blocks })
}

#[derive(Clone, Debug, Serialize)]
pub struct QuarticRow {
    pub poly: String,
    pub c: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<QuarticCase>,
    pub det_valuation: Option<u64>,
    pub predicted_scale_sum: Option<u64>,
    /// Scale/rank multisets agree.
    pub shape_ok: bool,
    /// Full 2-adic invariants agree (constituent parities and det class).
    /// Informational: the displayed unit values are not always right up to
    /// squares, while the scales are.
    pub invariants_ok: bool,
    /// b ≡ −1 mod 4 in case (ii); vacuous elsewhere.
    pub case_condition_ok: bool,
    pub patterns: Vec<PatternTag>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub computed: Option<JordanDecomposition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted: Option<QuarticPrediction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuarticTableReport {
    pub rows: Vec<QuarticRow>,
    pub passed: usize,
    pub total: usize,
}

fn check_row(poly: &[BigInt], row: &mut QuarticRow) -> Result<()> {
    let gram = trace_gram(&NumberFieldInput::new(poly.to_vec(), None)?)?;
    let computed = jordan_decompose(&gram, 2)?;
    let prediction = quartic_wild2_classify(poly)?;
    row.case = Some(prediction.case);
    row.det_valuation = Some(valuation_int(&gram.determinant(), 2)? as u64);
    row.predicted_scale_sum = Some(prediction.scale_sum());
    if prediction.units_valid() {
        let predicted = jordan_decompose(&prediction.gram(), 2)?;
        row.shape_ok = predicted.scale_rank_multiset() == computed.scale_rank_multiset();
        row.invariants_ok = predicted.invariants_match(&computed);
    }
    row.case_condition_ok = prediction.case != QuarticCase::II || (&poly[0] % 4 + 4) % 4 == BigInt::from(3);
    row.patterns = orthogonal_factor_scan(&computed).into_iter().collect();
    row.computed = Some(computed);
    row.predicted = Some(prediction);
    Ok(())
}

/// Check one polynomial against its predicted form and tabulated c.
pub fn verify_quartic(poly: &[BigInt], c: u32) -> QuarticRow {
    let mut row = QuarticRow {
        poly: format_poly(poly),
        c,
        case: None,
        det_valuation: None,
        predicted_scale_sum: None,
        shape_ok: false,
        invariants_ok: false,
        case_condition_ok: false,
        patterns: Vec::new(),
        pass: false,
        computed: None,
        predicted: None,
        error: None,
    };
    if let Err(e) = check_row(poly, &mut row) {
        row.error = Some(e.to_string());
        return row;
    }
    row.pass = row.det_valuation == Some(c as u64)
        && row.predicted_scale_sum == Some(c as u64)
        && row.shape_ok
        && row.case_condition_ok
        && !row.patterns.is_empty();
    row
}

/// All 36 rows, in table order.
pub fn verify_quartic_table() -> QuarticTableReport {
    let rows: Vec<QuarticRow> = QUARTIC_TABLE
        .par_iter()
        .map(|(p, c)| verify_quartic(&p.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>(), *c))
        .collect();
    let passed = rows.iter().filter(|r| r.pass).count();
    QuarticTableReport { total: rows.len(), passed, rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn classify_examples() {
        let p = quartic_wild2_classify(&ints(&[2, 0, 6, 0, 1])).unwrap();
        assert_eq!(p.case, QuarticCase::I);
        assert_eq!(p.blocks.iter().map(|b| b.scale).collect::<Vec<_>>(), vec![2, 2, 2, 3]);
        assert_eq!(p.scale_sum(), 9);
        let p = quartic_wild2_classify(&ints(&[6, 0, 0, 0, 1])).unwrap();
        assert_eq!(p.case, QuarticCase::IV);
        assert_eq!(p.blocks[1].unit, Some(rat(-3, 1)));
        assert_eq!(p.blocks[2], PredictedBlock { scale: 3, unit: None });
        let p = quartic_wild2_classify(&ints(&[22, 8, 8, 0, 1])).unwrap();
        assert_eq!(p.case, QuarticCase::Special);
        assert_eq!(p.blocks[3].unit, Some(rat(-773, 3)));
        assert_eq!(quartic_wild2_classify(&ints(&[10, 8, 0, 0, 1])).unwrap().case, QuarticCase::EightX);
        assert_eq!(quartic_wild2_classify(&ints(&[3, 0, -6, 0, 1])).unwrap().case, QuarticCase::II);
        assert_eq!(quartic_wild2_classify(&ints(&[2, 0, 12, 0, 1])).unwrap().case, QuarticCase::III);
        assert_eq!(quartic_wild2_classify(&ints(&[1, 0, 1, 0, 1])).unwrap_err().code(), "UNRECOGNIZED_QUARTIC");
        assert_eq!(quartic_wild2_classify(&ints(&[-1, -1, 0, 1])).unwrap_err().code(), "UNRECOGNIZED_QUARTIC");
    }

    #[test]
    fn table_shapes() {
        let count = |case| QUARTIC_TABLE.iter().filter(|(p, _)| quartic_wild2_classify(&ints(p)).unwrap().case == case).count();
        assert_eq!(count(QuarticCase::I) + count(QuarticCase::II) + count(QuarticCase::III) + count(QuarticCase::IV), 32);
        assert_eq!(count(QuarticCase::EightX), 3);
        assert_eq!(count(QuarticCase::Special), 1);
        for (p, c) in QUARTIC_TABLE {
            assert_eq!(quartic_wild2_classify(&ints(&p)).unwrap().scale_sum(), c as u64, "{p:?}");
        }
    }

    #[test]
    fn single_rows() {
        let r = verify_quartic(&ints(&[2, 0, -2, 0, 1]), 9);
        assert!(r.pass, "{r:?}");
        assert!(r.patterns.contains(&PatternTag::UnitTripleSameScale));
        let r = verify_quartic(&ints(&[2, 0, 0, 0, 1]), 11);
        assert!(r.pass, "{r:?}");
        let r = verify_quartic(&ints(&[2, 0, 0, 0, 1]), 10);
        assert!(!r.pass);
        let r = verify_quartic(&ints(&[1, 0, 1, 0, 1]), 9);
        assert!(!r.pass && r.error.is_some());
    }

    #[test]
    fn unit_values_up_to_squares() {
        let report = verify_quartic_table();
        for (r, (p, _)) in report.rows.iter().zip(QUARTIC_TABLE) {
            let case = r.case.unwrap();
            let exact = matches!(case, QuarticCase::IV | QuarticCase::Special);
            assert_eq!(r.invariants_ok, exact, "{}", r.poly);
            if matches!(case, QuarticCase::I | QuarticCase::II | QuarticCase::III) {
                // the diagonalization chain ends in −4(b/a)(a² − b): flipping
                // the sign of the last displayed unit gives the right class
                let mut fixed = r.predicted.clone().unwrap();
                let last = fixed.blocks.last_mut().unwrap();
                last.unit = last.unit.as_ref().map(|u| -u);
                let computed = r.computed.as_ref().unwrap();
                assert!(jordan_decompose(&fixed.gram(), 2).unwrap().invariants_match(computed), "{p:?}");
            }
        }
    }

    #[test]
    fn whole_table() {
        let report = verify_quartic_table();
        for r in &report.rows {
            assert!(r.pass, "{}", serde_json::to_string(r).unwrap());
        }
        assert_eq!((report.passed, report.total), (36, 36));
        assert_eq!(report.rows[0].poly, "x^4 + 6x^2 + 2");
    }
}
