//! Integral Gram matrices and their p-adic Jordan decompositions.
//!
//! Decomposition works on residues modulo p^N with N = v_p(det) + 4. Every
//! elimination step divides the pivot row by p^v before multiplying, so the
//! update term is exact modulo p^N and no precision is lost along the way.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::{inv_mod, is_prime, modp, strip_prime};
use crate::error::{Error, Result};
use crate::padic::{square_class_int, PAdicSquareClass};
use crate::serial::{int_from_json, int_to_json};

const MAX_RETRIES: u32 = 3;

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn determinant(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = rows.to_vec();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    Positive,
    Negative,
    Indefinite,
}

/// A symmetric nonsingular integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    rows: Vec<Vec<BigInt>>,
}

impl GramMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::GramShape("empty matrix".into()));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::GramShape(format!("row {i} has {} entries, expected {n}", rows[i].len())));
        }
        for i in 0..n {
            for j in i + 1..n {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::GramAsymmetric { row: i, col: j });
                }
            }
        }
        if determinant(&rows).is_zero() {
            return Err(Error::GramSingular);
        }
        Ok(GramMatrix { rows })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn diagonal(entries: &[BigInt]) -> Result<Self> {
        let n = entries.len();
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        for (i, e) in entries.iter().enumerate() {
            rows[i][i] = e.clone();
        }
        Self::new(rows)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.rows)
    }

    /// Leading principal minors D_1, ..., D_n.
    pub fn leading_minors(&self) -> Vec<BigInt> {
        (1..=self.dim())
            .map(|k| {
                let sub: Vec<Vec<BigInt>> = self.rows[..k].iter().map(|r| r[..k].to_vec()).collect();
                determinant(&sub)
            })
            .collect()
    }

    /// Sylvester's criterion on the leading minors.
    pub fn definiteness(&self) -> Definiteness {
        let minors = self.leading_minors();
        if minors.iter().all(|m| m.is_positive()) {
            Definiteness::Positive
        } else if minors.iter().enumerate().all(|(k, m)| if k % 2 == 0 { m.is_negative() } else { m.is_positive() }) {
            Definiteness::Negative
        } else {
            Definiteness::Indefinite
        }
    }

    pub fn is_definite(&self) -> bool {
        self.definiteness() != Definiteness::Indefinite
    }

    /// The Gram matrix Uᵀ G U of the lattice in a new basis.
    pub fn transform(&self, u: &[Vec<BigInt>]) -> Result<GramMatrix> {
        let n = self.dim();
        if u.len() != n || u.iter().any(|r| r.len() != n) {
            return Err(Error::GramShape("transformation has the wrong shape".into()));
        }
        let mut gu = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                gu[i][j] = (0..n).map(|k| &self.rows[i][k] * &u[k][j]).sum();
            }
        }
        let mut out = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                out[i][j] = (0..n).map(|k| &u[k][i] * &gu[k][j]).sum();
            }
        }
        GramMatrix::new(out)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(int_to_json).collect())).collect();
        serde_json::json!({ "n": self.dim(), "rows": rows })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rows = v
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::GramShape("missing \"rows\" array".into()))?;
        let rows = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::GramShape("row is not an array".into()))?
                    .iter()
                    .map(int_from_json)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(n) = v.get("n") {
            if n.as_u64() != Some(rows.len() as u64) {
                return Err(Error::GramShape(format!("\"n\" is {n} but there are {} rows", rows.len())));
            }
        }
        Self::new(rows)
    }

    /// CSV: one row per line, entries separated by commas. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.split(',')
                    .map(|t| t.trim().parse::<BigInt>().map_err(|_| Error::GramShape(format!("bad entry {t:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    /// JSON if the text starts with `{`, CSV otherwise.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(&serde_json::from_str(text)?)
        } else {
            Self::from_csv(text)
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

impl fmt::Display for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockKind {
    Unit(PAdicSquareClass),
    Hyperbolic,
    EvenA,
}

/// p^scale times a unimodular block: [u], [[0,1],[1,0]] or [[2,1],[1,2]].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JordanBlock {
    pub scale: u32,
    pub kind: BlockKind,
}

impl JordanBlock {
    pub fn unit(scale: u32, class: PAdicSquareClass) -> Self {
        JordanBlock { scale, kind: BlockKind::Unit(class) }
    }

    pub fn hyperbolic(scale: u32) -> Self {
        JordanBlock { scale, kind: BlockKind::Hyperbolic }
    }

    pub fn even_a(scale: u32) -> Self {
        JordanBlock { scale, kind: BlockKind::EvenA }
    }

    pub fn rank(&self) -> usize {
        match self.kind {
            BlockKind::Unit(_) => 1,
            _ => 2,
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.kind, BlockKind::Unit(_))
    }

    /// Square class of the block determinant.
    pub fn det_class(&self, p: u64) -> PAdicSquareClass {
        match self.kind {
            BlockKind::Unit(c) => PAdicSquareClass::from_parts(p, self.scale % 2 == 1, c.unit_label()).unwrap(),
            BlockKind::Hyperbolic => square_class_int(&BigInt::from(-1), p).unwrap(),
            BlockKind::EvenA => square_class_int(&BigInt::from(3), p).unwrap(),
        }
    }
}

/// One Jordan constituent: all blocks of a given scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Constituent {
    pub scale: u32,
    pub rank: usize,
    /// Contains a unit block (odd lattice). Always true for odd p.
    pub odd: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "DecompositionWire", try_from = "DecompositionWire")]
pub struct JordanDecomposition {
    prime: u64,
    dimension: usize,
    blocks: Vec<JordanBlock>,
}

impl JordanDecomposition {
    /// Build from blocks; they are sorted into canonical order.
    pub fn from_blocks(prime: u64, mut blocks: Vec<JordanBlock>) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        for b in &blocks {
            match b.kind {
                BlockKind::Unit(c) if c.prime() != prime || c.odd_valuation() => {
                    return Err(Error::Parse(format!("unit block carries a non-unit class {c} at p = {prime}")))
                }
                BlockKind::Hyperbolic | BlockKind::EvenA if prime != 2 => {
                    return Err(Error::Parse(format!("even blocks only occur at p = 2, not p = {prime}")))
                }
                _ => {}
            }
        }
        blocks.sort();
        let dimension = blocks.iter().map(JordanBlock::rank).sum();
        Ok(JordanDecomposition { prime, dimension, blocks })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn blocks(&self) -> &[JordanBlock] {
        &self.blocks
    }

    /// Unit classes are canonical only for odd p.
    pub fn unit_classes_canonical(&self) -> bool {
        self.prime != 2
    }

    pub fn det_valuation(&self) -> u64 {
        self.blocks.iter().map(|b| b.scale as u64 * b.rank() as u64).sum()
    }

    pub fn det_class(&self) -> PAdicSquareClass {
        self.blocks
            .iter()
            .fold(PAdicSquareClass::identity(self.prime), |acc, b| acc * b.det_class(self.prime))
    }

    pub fn constituents(&self) -> Vec<Constituent> {
        let mut map: BTreeMap<u32, Constituent> = BTreeMap::new();
        for b in &self.blocks {
            let c = map.entry(b.scale).or_insert(Constituent { scale: b.scale, rank: 0, odd: false });
            c.rank += b.rank();
            c.odd |= b.is_unit();
        }
        map.into_values().collect()
    }

    /// Total rank of the blocks at a given scale.
    pub fn rank_at(&self, scale: u32) -> usize {
        self.blocks.iter().filter(|b| b.scale == scale).map(JordanBlock::rank).sum()
    }

    /// Multiset of (scale, rank) over blocks.
    pub fn scale_rank_multiset(&self) -> Vec<(u32, usize)> {
        self.blocks.iter().map(|b| (b.scale, b.rank())).collect()
    }

    /// The invariants that do not depend on elimination order: the full
    /// block list for odd p, constituent types plus determinant class at 2.
    pub fn invariants_match(&self, other: &JordanDecomposition) -> bool {
        if self.prime != other.prime || self.dimension != other.dimension {
            return false;
        }
        if self.prime == 2 {
            self.constituents() == other.constituents() && self.det_class() == other.det_class()
        } else {
            self.blocks == other.blocks
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("decomposition serializes")
    }
}

impl fmt::Display for JordanDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let body = match b.kind {
                    BlockKind::Unit(c) => format!("<{c}>"),
                    BlockKind::Hyperbolic => "H".to_string(),
                    BlockKind::EvenA => "A".to_string(),
                };
                if b.scale == 0 {
                    body
                } else {
                    format!("{}^{}{}", self.prime, b.scale, body)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Serialize, Deserialize)]
struct BlockWire {
    scale: u32,
    kind: String,
    rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unit: Option<u64>,
}

#[derive(Clone, Serialize, Deserialize)]
struct DecompositionWire {
    prime: u64,
    dimension: usize,
    det_valuation: u64,
    unit_classes_canonical: bool,
    blocks: Vec<BlockWire>,
}

impl From<JordanDecomposition> for DecompositionWire {
    fn from(j: JordanDecomposition) -> Self {
        let blocks = j
            .blocks
            .iter()
            .map(|b| {
                let (kind, unit) = match b.kind {
                    BlockKind::Unit(c) => ("unit", c.representative().to_u64()),
                    BlockKind::Hyperbolic => ("hyperbolic", None),
                    BlockKind::EvenA => ("even_a", None),
                };
                BlockWire { scale: b.scale, kind: kind.into(), rank: b.rank(), unit }
            })
            .collect();
        DecompositionWire {
            prime: j.prime,
            dimension: j.dimension,
            det_valuation: j.det_valuation(),
            unit_classes_canonical: j.unit_classes_canonical(),
            blocks,
        }
    }
}

impl TryFrom<DecompositionWire> for JordanDecomposition {
    type Error = Error;

    fn try_from(w: DecompositionWire) -> Result<Self> {
        let blocks = w
            .blocks
            .iter()
            .map(|b| {
                let kind = match (b.kind.as_str(), b.unit) {
                    ("unit", Some(u)) => BlockKind::Unit(square_class_int(&BigInt::from(u), w.prime)?),
                    ("hyperbolic", None) => BlockKind::Hyperbolic,
                    ("even_a", None) => BlockKind::EvenA,
                    _ => return Err(Error::Parse(format!("bad block kind {:?}", b.kind))),
                };
                Ok(JordanBlock { scale: b.scale, kind })
            })
            .collect::<Result<Vec<_>>>()?;
        let j = JordanDecomposition::from_blocks(w.prime, blocks)?;
        if j.dimension != w.dimension {
            return Err(Error::Parse("block ranks do not add up to the dimension".into()));
        }
        Ok(j)
    }
}

/// Raw output of the elimination before normalization.
enum Raw {
    /// Scaled unit, known modulo p^(prec - scale).
    Unit(u32, BigInt),
    /// Scaled 2x2 block (x, y, z) with y odd and x, z even.
    Even(u32, [BigInt; 3]),
}

struct Eliminator {
    p: BigInt,
    prec: u32,
    modulus: BigInt,
    a: Vec<Vec<BigInt>>,
}

impl Eliminator {
    fn val(&self, x: &BigInt) -> u32 {
        if x.is_zero() {
            self.prec
        } else {
            strip_prime(x, self.p.to_u64().unwrap()).0.min(self.prec)
        }
    }

    fn pow(&self, e: u32) -> BigInt {
        num_traits::pow(self.p.clone(), e as usize)
    }

    fn reduce(&self, x: BigInt) -> BigInt {
        modp(&x, &self.modulus)
    }

    fn pivot_unit(&mut self, active: &mut Vec<usize>, i: usize, v: u32) -> Raw {
        let pv = self.pow(v);
        let sub = self.pow(self.prec - v);
        let u = &self.a[i][i] / &pv;
        let u_inv = inv_mod(&u, &sub).expect("pivot is a unit");
        active.retain(|&k| k != i);
        let c: Vec<BigInt> = active.iter().map(|&k| &self.a[k][i] / &pv).collect();
        for (s, &k) in active.iter().enumerate() {
            for (t, &l) in active.iter().enumerate().skip(s) {
                let corr = &c[s] * &c[t] % &sub * &u_inv % &sub * &pv;
                let val = self.reduce(&self.a[k][l] - corr);
                self.a[k][l] = val.clone();
                self.a[l][k] = val;
            }
        }
        Raw::Unit(v, modp(&u, &sub))
    }

    fn pivot_pair(&mut self, active: &mut Vec<usize>, i: usize, j: usize, v: u32) -> Raw {
        let pv = self.pow(v);
        let sub = self.pow(self.prec - v);
        let x = &self.a[i][i] / &pv;
        let y = &self.a[i][j] / &pv;
        let z = &self.a[j][j] / &pv;
        let det = modp(&(&x * &z - &y * &y), &sub);
        let det_inv = inv_mod(&det, &sub).expect("pair determinant is a unit");
        active.retain(|&k| k != i && k != j);
        let b: Vec<(BigInt, BigInt)> = active.iter().map(|&k| (&self.a[k][i] / &pv, &self.a[k][j] / &pv)).collect();
        for (s, &k) in active.iter().enumerate() {
            for (t, &l) in active.iter().enumerate().skip(s) {
                let (b0, b1) = &b[s];
                let (c0, c1) = &b[t];
                // bᵀ adj(A0) c
                let q = b0 * &z * c0 - b0 * &y * c1 - b1 * &y * c0 + b1 * &x * c1;
                let corr = modp(&q, &sub) * &det_inv % &sub * &pv;
                let val = self.reduce(&self.a[k][l] - corr);
                self.a[k][l] = val.clone();
                self.a[l][k] = val;
            }
        }
        Raw::Even(v, [modp(&x, &sub), modp(&y, &sub), modp(&z, &sub)])
    }

    fn add_into(&mut self, active: &[usize], i: usize, j: usize) {
        for &k in active {
            let t = &self.a[i][k] + &self.a[j][k];
            self.a[i][k] = self.reduce(t);
        }
        for &k in active {
            let t = &self.a[k][i] + &self.a[k][j];
            self.a[k][i] = self.reduce(t);
        }
    }

    fn run(mut self) -> Result<Vec<Raw>> {
        let p = self.p.to_u64().unwrap();
        let slack = if p == 2 { 3 } else { 1 };
        let mut active: Vec<usize> = (0..self.a.len()).collect();
        let mut out = Vec::new();
        while !active.is_empty() {
            let mut vmin = u32::MAX;
            let mut off = None;
            for (s, &i) in active.iter().enumerate() {
                for &j in &active[s..] {
                    let v = self.val(&self.a[i][j]);
                    if v < vmin {
                        vmin = v;
                        off = (i != j).then_some((i, j));
                    }
                }
            }
            if vmin + slack > self.prec {
                return Err(Error::PrecisionExhausted { prime: p, precision: self.prec });
            }
            let diag = active.iter().copied().find(|&i| self.val(&self.a[i][i]) == vmin);
            let raw = match (diag, off) {
                (Some(i), _) => self.pivot_unit(&mut active, i, vmin),
                (None, Some((i, j))) if p != 2 => {
                    self.add_into(&active, i, j);
                    self.pivot_unit(&mut active, i, vmin)
                }
                (None, Some((i, j))) => self.pivot_pair(&mut active, i, j, vmin),
                (None, None) => unreachable!("minimum is attained somewhere"),
            };
            out.push(raw);
        }
        Ok(out)
    }
}

/// Rewrite u ⊥ [[x,y],[y,z]] (u odd, block even unimodular) as three units.
/// With w = u + x, the vector e_u + e_1 has norm w and its complement is
/// diagonalized by one more step.
fn split_even_against_unit(u: &BigInt, m: &[BigInt; 3], sub: &BigInt) -> [BigInt; 3] {
    let [x, y, z] = m;
    let w = modp(&(u + x), sub);
    let w_inv = inv_mod(&w, sub).expect("odd");
    let r = modp(&(z - y * y * &w_inv), sub);
    let r_inv = inv_mod(&r, sub).expect("odd");
    let det = x * z - y * y;
    let s = modp(&(u * det * &w_inv % sub * r_inv), sub);
    [w, r, s]
}

fn normalize(p: u64, prec: u32, raw: Vec<Raw>) -> Result<Vec<JordanBlock>> {
    let mut units: BTreeMap<u32, Vec<BigInt>> = BTreeMap::new();
    let mut evens: BTreeMap<u32, Vec<[BigInt; 3]>> = BTreeMap::new();
    for r in raw {
        match r {
            Raw::Unit(s, u) => units.entry(s).or_default().push(u),
            Raw::Even(s, m) => evens.entry(s).or_default().push(m),
        }
    }
    let bp = BigInt::from(p);
    let mut blocks = Vec::new();
    if p != 2 {
        for (scale, us) in units {
            let mut delta = PAdicSquareClass::identity(p);
            for u in &us {
                delta = delta * square_class_int(u, p)?;
            }
            for _ in 1..us.len() {
                blocks.push(JordanBlock::unit(scale, PAdicSquareClass::identity(p)));
            }
            blocks.push(JordanBlock::unit(scale, delta));
        }
        return Ok(blocks);
    }
    let scales: BTreeSet<u32> = units.keys().chain(evens.keys()).copied().collect();
    for scale in scales {
        let sub = num_traits::pow(bp.clone(), (prec - scale) as usize);
        let mut us = units.remove(&scale).unwrap_or_default();
        let mut es = evens.remove(&scale).unwrap_or_default();
        if !us.is_empty() {
            while let Some(m) = es.pop() {
                let u = us.pop().expect("nonempty");
                us.extend(split_even_against_unit(&u, &m, &sub));
            }
        }
        for u in &us {
            blocks.push(JordanBlock::unit(scale, square_class_int(u, 2)?));
        }
        let mut n_a = 0;
        for [x, y, z] in &es {
            let det = modp(&(x * z - y * y), &BigInt::from(8));
            if det == BigInt::from(3) {
                n_a += 1;
            } else {
                blocks.push(JordanBlock::hyperbolic(scale));
            }
        }
        // A ⊥ A ≅ H ⊥ H
        for _ in 0..n_a / 2 {
            blocks.push(JordanBlock::hyperbolic(scale));
            blocks.push(JordanBlock::hyperbolic(scale));
        }
        if n_a % 2 == 1 {
            blocks.push(JordanBlock::even_a(scale));
        }
    }
    Ok(blocks)
}

fn decompose_at(g: &GramMatrix, p: u64, prec: u32) -> Result<Vec<JordanBlock>> {
    let bp = BigInt::from(p);
    let modulus = num_traits::pow(bp.clone(), prec as usize);
    let a = g.rows.iter().map(|r| r.iter().map(|x| modp(x, &modulus)).collect()).collect();
    let raw = Eliminator { p: bp, prec, modulus, a }.run()?;
    normalize(p, prec, raw)
}

fn check(j: &JordanDecomposition, g: &GramMatrix, det: &BigInt) -> Result<()> {
    let p = j.prime;
    let fail = |detail: String| Err(Error::JordanInconsistent { prime: p, detail });
    if j.dimension != g.dim() {
        return fail(format!("ranks sum to {}, dimension is {}", j.dimension, g.dim()));
    }
    let vdet = strip_prime(det, p).0 as u64;
    if j.det_valuation() != vdet {
        return fail(format!("scales give v_p(det) = {}, actual {vdet}", j.det_valuation()));
    }
    let class = square_class_int(det, p)?;
    if j.det_class() != class {
        return fail(format!("determinant class {} differs from {class}", j.det_class()));
    }
    Ok(())
}

/// Jordan decomposition of the lattice over Z_p. Odd p gives a diagonal
/// form normalized to <1, ..., 1, δ> per scale; p = 2 gives unit,
/// hyperbolic and even blocks with at most one even block per constituent
/// and no even blocks in odd constituents.
pub fn jordan_decompose(g: &GramMatrix, p: u64) -> Result<JordanDecomposition> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let det = g.determinant();
    let mut prec = strip_prime(&det, p).0 + 4;
    for _ in 0..=MAX_RETRIES {
        match decompose_at(g, p, prec) {
            Err(Error::PrecisionExhausted { .. }) => prec *= 2,
            Err(e) => return Err(e),
            Ok(blocks) => {
                let j = JordanDecomposition::from_blocks(p, blocks)?;
                check(&j, g, &det)?;
                return Ok(j);
            }
        }
    }
    Err(Error::PrecisionExhausted { prime: p, precision: prec / 2 })
}

/// Block-diagonal Gram matrix realizing a decomposition.
pub fn assemble(j: &JordanDecomposition) -> GramMatrix {
    let n = j.dimension;
    let mut rows = vec![vec![BigInt::zero(); n]; n];
    let mut at = 0;
    for b in &j.blocks {
        let s = num_traits::pow(BigInt::from(j.prime), b.scale as usize);
        match b.kind {
            BlockKind::Unit(c) => rows[at][at] = &s * c.representative(),
            BlockKind::Hyperbolic | BlockKind::EvenA => {
                let d = if b.kind == BlockKind::EvenA { 2 } else { 0 };
                rows[at][at] = &s * d;
                rows[at + 1][at + 1] = &s * d;
                rows[at][at + 1] = s.clone();
                rows[at + 1][at] = s;
            }
        }
        at += b.rank();
    }
    GramMatrix::new(rows).expect("blocks are nonsingular")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PatternTag {
    OddEqualScalePair,
    TwoH,
    UnitTripleSameScale,
    UnitPairPlusNext,
}

/// Orthogonal factors whose presence forces the spinor norm image to
/// contain all units.
pub fn orthogonal_factor_scan(j: &JordanDecomposition) -> BTreeSet<PatternTag> {
    let mut units: BTreeMap<u32, usize> = BTreeMap::new();
    for b in &j.blocks {
        if b.is_unit() {
            *units.entry(b.scale).or_default() += 1;
        }
    }
    let mut out = BTreeSet::new();
    if j.prime != 2 {
        if units.values().any(|&c| c >= 2) {
            out.insert(PatternTag::OddEqualScalePair);
        }
        return out;
    }
    if j.blocks.iter().any(|b| !b.is_unit()) {
        out.insert(PatternTag::TwoH);
    }
    if units.values().any(|&c| c >= 3) {
        out.insert(PatternTag::UnitTripleSameScale);
    }
    if units.iter().any(|(&s, &c)| c >= 2 && units.get(&(s + 1)).is_some_and(|&d| d >= 1)) {
        out.insert(PatternTag::UnitPairPlusNext);
    }
    out
}
