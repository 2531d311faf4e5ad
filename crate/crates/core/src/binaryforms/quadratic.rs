//! The trace form of a quadratic field Q(√d) as a binary form, and the
//! one-spinor-genus verdict through the 4-rank of G_d = C_{−4d}.

use serde::{Deserialize, Serialize};

use super::classgroup::{class_group_with, ClassGroupSummary, SpinorCounts, DEFAULT_DISC_LIMIT};
use super::BinaryForm;
use crate::arith::{is_squarefree, SpfTable};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticTraceForm {
    pub d: i64,
    pub form: BinaryForm,
    /// Set when `form` is half of the trace form ⟨2, 0, 2d⟩.
    pub halved: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticReport {
    pub d: i64,
    pub form: BinaryForm,
    pub halved: bool,
    pub class_group: ClassGroupSummary,
    pub rank4: u32,
    pub verdict: bool,
    pub spinor_counts: SpinorCounts,
}

/// Admissible d: squarefree, not 0 or 1, and not −1 (square discriminant).
pub fn check_d(d: i64) -> Result<()> {
    if d == 0 || d == 1 {
        return Err(Error::DExcluded(d));
    }
    if !is_squarefree(d) {
        return Err(Error::DNotSquarefree(d));
    }
    if d == -1 {
        return Err(Error::SquareDiscriminant(4));
    }
    Ok(())
}

/// Fundamental discriminant of Q(√−d).
pub fn fundamental_of_d(d: i64) -> i64 {
    if d.rem_euclid(4) == 3 {
        -d
    } else {
        -4 * d
    }
}

pub fn quadratic_trace_form(d: i64) -> Result<QuadraticTraceForm> {
    check_d(d)?;
    let (form, halved) = if d.rem_euclid(4) == 1 {
        (BinaryForm::new(2, 2, (1 + d) / 2)?, false)
    } else {
        (BinaryForm::new(1, 0, d)?, true)
    };
    Ok(QuadraticTraceForm { d, form, halved })
}

pub fn rank4_of_d(d: i64) -> Result<u32> {
    rank4_of_d_with(d, DEFAULT_DISC_LIMIT, None)
}

/// 4-rank of G_d, computed in C_{−d} when d ≡ 3 mod 4.
pub fn rank4_of_d_with(d: i64, limit: i64, spf: Option<&SpfTable>) -> Result<u32> {
    check_d(d)?;
    Ok(class_group_with(fundamental_of_d(d), limit, spf)?.rank4())
}

/// Whether the trace form of Q(√d) has one proper spinor genus in its genus.
pub fn quadratic_verdict(d: i64) -> Result<bool> {
    Ok(rank4_of_d(d)? == 0)
}

pub fn quadratic_report(d: i64) -> Result<QuadraticReport> {
    quadratic_report_with(d, DEFAULT_DISC_LIMIT)
}

pub fn quadratic_report_with(d: i64, limit: i64) -> Result<QuadraticReport> {
    let t = quadratic_trace_form(d)?;
    let g = class_group_with(-4 * d, limit, None)?;
    let rank4 = rank4_of_d_with(d, limit, None)?;
    Ok(QuadraticReport {
        d,
        form: t.form,
        halved: t.halved,
        class_group: g.summary(),
        rank4,
        verdict: rank4 == 0,
        spinor_counts: g.spinor_counts(),
    })
}
