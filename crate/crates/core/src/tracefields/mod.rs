//! Integral trace forms Tr(xy) of number fields, predicted local shapes at
//! tame primes, discriminant bounds, and whole-field analysis.

mod fixtures;
mod quartic;

pub use fixtures::{load_fixtures, parse_fixtures, FieldFixture, FIXTURES_ENV};
pub use quartic::{
    quartic_wild2_classify, verify_quartic, verify_quartic_table, PredictedBlock, QuarticCase, QuarticPrediction, QuarticRow,
    QuarticTableReport, QUARTIC_TABLE,
};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::Value;

use crate::arith::{factor_u64, is_prime};
use crate::binaryforms::{quadratic_report, QuadraticReport};
use crate::error::{Error, Result};
use crate::lattice::{determinant, jordan_decompose, GramMatrix, JordanDecomposition};
use crate::padic::valuation_int;
use crate::poly::{check_irreducible, discriminant, format_poly, Irreducibility, Poly};
use crate::serial::{int_from_json, rational_from_json};
use crate::spinor::{one_spinor_genus, GenusVerdict};

/// A monic integer polynomial with an optional basis of the order,
/// given as rows of coordinates in the power basis 1, θ, ..., θⁿ⁻¹.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberFieldInput {
    poly: Vec<BigInt>,
    basis: Option<Vec<Vec<BigRational>>>,
}

impl NumberFieldInput {
    pub fn new(poly: Vec<BigInt>, basis: Option<Vec<Vec<BigRational>>>) -> Result<Self> {
        let n = poly.len().saturating_sub(1);
        if n < 2 || !poly[n].is_one() {
            return Err(Error::InvalidPolynomial("expected a monic polynomial of degree at least 2".into()));
        }
        if discriminant(&poly).is_zero() {
            return Err(Error::InvalidPolynomial(format!("{} is not squarefree", format_poly(&poly))));
        }
        if let Some(b) = &basis {
            if b.len() != n || b.iter().any(|r| r.len() != n) {
                return Err(Error::SingularBasis);
            }
            let den = b.iter().flatten().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let ints: Vec<Vec<BigInt>> = b.iter().map(|r| r.iter().map(|x| (x * &den).to_integer()).collect()).collect();
            if determinant(&ints).is_zero() {
                return Err(Error::SingularBasis);
            }
        }
        Ok(NumberFieldInput { poly, basis })
    }

    pub fn from_ints(poly: &[i64]) -> Result<Self> {
        Self::new(poly.iter().map(|&c| BigInt::from(c)).collect(), None)
    }

    pub fn poly(&self) -> &[BigInt] {
        &self.poly
    }

    pub fn basis(&self) -> Option<&[Vec<BigRational>]> {
        self.basis.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    fn basis_polys(&self) -> Vec<Poly> {
        let n = self.degree();
        match &self.basis {
            Some(b) => b.iter().map(|r| Poly::new(r.clone())).collect(),
            None => (0..n)
                .map(|i| {
                    let mut c = vec![BigRational::zero(); i + 1];
                    c[i] = BigRational::one();
                    Poly::new(c)
                })
                .collect(),
        }
    }
}

/// Splitting of a prime: pairs (e_i, f_i) of ramification and residue degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamificationData {
    pub prime: u64,
    pub pairs: Vec<(u64, u64)>,
}

impl RamificationData {
    pub fn new(prime: u64, pairs: Vec<(u64, u64)>) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        if pairs.is_empty() || pairs.iter().any(|&(e, f)| e == 0 || f == 0) {
            return Err(Error::RamInvalid(format!("p = {prime}: need a nonempty list of pairs with e, f ≥ 1")));
        }
        Ok(RamificationData { prime, pairs })
    }

    pub fn degree(&self) -> u64 {
        self.pairs.iter().map(|&(e, f)| e * f).sum()
    }

    pub fn check_degree(&self, n: usize) -> Result<()> {
        let sum = self.degree();
        if sum != n as u64 {
            return Err(Error::RamInconsistent { sum, degree: n as u64 });
        }
        Ok(())
    }

    /// F_p = Σ f_i.
    pub fn residue_sum(&self) -> u64 {
        self.pairs.iter().map(|&(_, f)| f).sum()
    }

    /// M_p = max v_p(e_i).
    pub fn wildness(&self) -> u32 {
        self.pairs.iter().map(|&(e, _)| v_p(e, self.prime)).max().unwrap_or(0)
    }

    pub fn is_tame(&self) -> bool {
        self.wildness() == 0
    }
}

fn v_p(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Traces p_k = Tr(θᵏ) for k = 0, ..., 2n−2, by Newton's identities.
pub fn power_sums(f: &[BigInt]) -> Vec<BigInt> {
    let n = f.len() - 1;
    // c(j) is the coefficient of x^(n-j)
    let c = |j: usize| if j <= n { f[n - j].clone() } else { BigInt::zero() };
    let mut p = vec![BigInt::from(n)];
    for k in 1..=(2 * n - 2) {
        let mut s = if k <= n { BigInt::from(k) * c(k) } else { BigInt::zero() };
        for i in 1..k.min(n + 1) {
            s += c(i) * &p[k - i];
        }
        p.push(-s);
    }
    p
}

/// Gram matrix of Tr(b_i b_j) over the basis of the input.
pub fn trace_gram(input: &NumberFieldInput) -> Result<GramMatrix> {
    let n = input.degree();
    let f = Poly::from_ints(input.poly());
    let sums: Vec<BigRational> = power_sums(input.poly()).into_iter().map(BigRational::from_integer).collect();
    let basis = input.basis_polys();
    let mut rows = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let prod = basis[i].mul(&basis[j]).rem(&f);
            let t: BigRational = prod.coeffs().iter().zip(&sums).map(|(a, s)| a * s).sum();
            if !t.is_integer() {
                return Err(Error::NonIntegralTrace { i, j, value: format!("{}/{}", t.numer(), t.denom()) });
            }
            rows[i][j] = t.to_integer();
            rows[j][i] = rows[i][j].clone();
        }
    }
    GramMatrix::new(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    /// A unit block with unspecified square class.
    Unit,
    Hyperbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeBlock {
    pub scale: u32,
    pub kind: ShapeKind,
}

/// Jordan skeleton predicted at a tame prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalShape {
    pub prime: u64,
    pub blocks: Vec<ShapeBlock>,
}

impl LocalShape {
    /// Sorted (scale, rank) per block, as in a Jordan decomposition.
    pub fn scale_rank_multiset(&self) -> Vec<(u32, usize)> {
        let mut m: Vec<(u32, usize)> = self.blocks.iter().map(|b| (b.scale, if b.kind == ShapeKind::Unit { 1 } else { 2 })).collect();
        m.sort_unstable();
        m
    }

    /// Same scales and ranks; at p = 2 also the same parity per constituent.
    pub fn matches(&self, j: &JordanDecomposition) -> bool {
        if j.prime() != self.prime || j.scale_rank_multiset() != self.scale_rank_multiset() {
            return false;
        }
        self.prime != 2
            || j.constituents().iter().all(|c| {
                let odd = self.blocks.iter().any(|b| b.scale == c.scale && b.kind == ShapeKind::Unit);
                c.odd == odd
            })
    }
}

/// Predicted Jordan shape of the trace form at a prime with M_p = 0.
pub fn tame_local_shape(n: usize, ram: &RamificationData) -> Result<LocalShape> {
    ram.check_degree(n)?;
    if !ram.is_tame() {
        return Err(Error::TameShapeWild { prime: ram.prime });
    }
    let f = ram.residue_sum() as usize;
    let unit = |scale| ShapeBlock { scale, kind: ShapeKind::Unit };
    let mut blocks: Vec<ShapeBlock> = (0..f).map(|_| unit(0)).collect();
    if ram.prime == 2 {
        if (n - f) % 2 != 0 {
            return Err(Error::RamInvalid(format!("p = 2: n - F_2 = {} is odd", n - f)));
        }
        blocks.extend((0..(n - f) / 2).map(|_| ShapeBlock { scale: 1, kind: ShapeKind::Hyperbolic }));
    } else {
        blocks.extend((0..n - f).map(|_| unit(1)));
    }
    Ok(LocalShape { prime: ram.prime, blocks })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DiscBound {
    /// n − F_p + Σ e_i f_i v_p(e_i).
    pub bound: u64,
    /// The bound is attained (M_p = 0).
    pub exact: bool,
    /// The coarser n(M_p + 1) − F_p.
    pub corollary: u64,
}

pub fn disc_bound(n: usize, ram: &RamificationData) -> Result<DiscBound> {
    ram.check_degree(n)?;
    let n = n as u64;
    let f = ram.residue_sum();
    let m = ram.wildness() as u64;
    let wild: u64 = ram.pairs.iter().map(|&(e, fi)| e * fi * v_p(e, ram.prime) as u64).sum();
    Ok(DiscBound { bound: n - f + wild, exact: m == 0, corollary: n * (m + 1) - f })
}

/// Per-prime consistency of the computed trace form against ramification data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalCheck {
    pub prime: u64,
    pub tame: bool,
    pub det_valuation: u64,
    pub bound: DiscBound,
    /// v_p(det) ≤ bound, with equality when the bound is exact.
    pub bound_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<LocalShape>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape_ok: Option<bool>,
    pub decomposition: JordanDecomposition,
}

impl LocalCheck {
    pub fn ok(&self) -> bool {
        self.bound_ok && self.shape_ok != Some(false)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldReport {
    pub poly: String,
    pub degree: usize,
    pub irreducibility: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    pub gram: Value,
    pub disc: Value,
    pub real_roots: usize,
    pub definite: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<GenusVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadratic: Option<QuadraticReport>,
    pub local_checks: Vec<LocalCheck>,
}

fn squarefree_part(n: &BigInt) -> Result<i64> {
    let m = n.to_i64().ok_or_else(|| Error::Parse(format!("discriminant {n} too large for a quadratic field")))?;
    let core: i64 = factor_u64(m.unsigned_abs()).into_iter().filter(|&(_, e)| e % 2 == 1).map(|(p, _)| p as i64).product();
    Ok(if m < 0 { -core } else { core })
}

/// Trace form, definiteness, spinor verdict and local cross-checks of a field.
pub fn analyze_field(input: &NumberFieldInput, ram: &BTreeMap<u64, RamificationData>) -> Result<FieldReport> {
    let n = input.degree();
    let irreducibility = check_irreducible(input.poly())?;
    let gram = trace_gram(input)?;
    let det = gram.determinant();
    let real_roots = Poly::from_ints(input.poly()).count_real_roots();
    let definite = real_roots == n;
    let (verdict, quadratic) = if n == 2 {
        (None, Some(quadratic_report(squarefree_part(&det)?)?))
    } else {
        (Some(one_spinor_genus(&gram, definite)?), None)
    };
    let mut local_checks = Vec::new();
    for (&p, r) in ram {
        let bound = disc_bound(n, r)?;
        let j = jordan_decompose(&gram, p)?;
        let v = valuation_int(&det, p)? as u64;
        let bound_ok = if bound.exact { v == bound.bound } else { v <= bound.bound };
        let shape = if r.is_tame() { Some(tame_local_shape(n, r)?) } else { None };
        let shape_ok = shape.as_ref().map(|s| s.matches(&j));
        local_checks.push(LocalCheck { prime: p, tame: r.is_tame(), det_valuation: v, bound, bound_ok, shape, shape_ok, decomposition: j });
    }
    Ok(FieldReport {
        poly: format_poly(input.poly()),
        degree: n,
        irreducibility: match irreducibility {
            Irreducibility::Proven => "proven",
            Irreducibility::Assumed => "assumed",
        },
        warning: (irreducibility == Irreducibility::Assumed)
            .then(|| format!("irreducibility assumed: degree {n} is above the exhaustive check, only squarefreeness was verified")),
        gram: gram.to_json(),
        disc: crate::serial::int_to_json(&det),
        real_roots,
        definite,
        verdict,
        quadratic,
        local_checks,
    })
}

/// Parse {"poly": [...], "basis": [[...]], "ramification": {"p": [[e, f], ...]}}.
pub fn parse_field_json(v: &Value) -> Result<(NumberFieldInput, BTreeMap<u64, RamificationData>)> {
    let poly = v
        .get("poly")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("field input needs a \"poly\" array".into()))?
        .iter()
        .map(int_from_json)
        .collect::<Result<Vec<_>>>()?;
    let basis = match v.get("basis") {
        None | Some(Value::Null) => None,
        Some(b) => Some(
            b.as_array()
                .ok_or_else(|| Error::Parse("\"basis\" must be an array of rows".into()))?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| Error::Parse("basis row must be an array".into()))?
                        .iter()
                        .map(rational_from_json)
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    let input = NumberFieldInput::new(poly, basis)?;
    let mut ram = BTreeMap::new();
    if let Some(r) = v.get("ramification").filter(|r| !r.is_null()) {
        let obj = r.as_object().ok_or_else(|| Error::Parse("\"ramification\" must be an object".into()))?;
        for (key, pairs) in obj {
            let p: u64 = key.trim().parse().map_err(|_| Error::RamInvalid(format!("bad prime {key:?}")))?;
            let pairs = serde_json::from_value::<Vec<(u64, u64)>>(pairs.clone())
                .map_err(|_| Error::RamInvalid(format!("p = {p}: expected [[e, f], ...]")))?;
            let data = RamificationData::new(p, pairs)?;
            data.check_degree(input.degree())?;
            ram.insert(p, data);
        }
    }
    Ok((input, ram))
}
