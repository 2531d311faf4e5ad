//! Square-free scans over quadratic fields Q(√d): how often the trace form
//! has a single proper spinor genus, split by sign and by d mod 4.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Mutex;

use bitvec::prelude::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{isqrt, primes_up_to, SpfTable};
use crate::binaryforms::{check_d, class_group_with, fundamental_of_d, rank4_of_d_with, redei_gate, redei_rank4, DEFAULT_DISC_LIMIT};
use crate::error::{Error, Result};

/// Bits 0..=x; bit n is set iff n ≥ 1 is squarefree.
pub fn squarefree_sieve(x: u64) -> BitVec {
    squarefree_segment(0, x + 1)
}

/// Bits for lo..hi; bit i is set iff lo + i ≥ 1 is squarefree.
pub fn squarefree_segment(lo: u64, hi: u64) -> BitVec {
    let mut bits = bitvec![1; (hi - lo) as usize];
    if lo == 0 && hi > 0 {
        bits.set(0, false);
    }
    for p in primes_up_to(isqrt(hi.saturating_sub(1))) {
        let q = p * p;
        let mut m = lo.div_ceil(q) * q;
        while m < hi {
            bits.set((m - lo) as usize, false);
            m += q;
        }
    }
    bits
}

/// ∏_{n=1}^{64} (1 − 2⁻ⁿ), within 2⁻⁶⁴ of φ(1/2).
pub fn euler_phi_half() -> BigRational {
    (1..=64u32).fold(BigRational::one(), |acc, n| {
        let den = BigInt::one() << n;
        acc * BigRational::new(&den - 1, den)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "both")]
    Both,
}

impl Sign {
    fn plus(self) -> bool {
        self != Sign::Minus
    }

    fn minus(self) -> bool {
        self != Sign::Plus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
            Sign::Both => "both",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            "both" => Ok(Sign::Both),
            _ => Err(Error::Parse(format!("sign must be +, - or both, not {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    Redei,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Oracle => "oracle",
            Method::Redei => "redei",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Method::Oracle),
            "redei" => Ok(Method::Redei),
            _ => Err(Error::Parse(format!("method must be oracle or redei, not {s:?}"))),
        }
    }
}

/// Rédei results are cross-checked against class groups up to this |d|.
pub const REDEI_GATE_LIMIT: i64 = 10_000;

pub const DEFAULT_CHUNK: u64 = 10_000;

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub xmax: u64,
    pub sign: Sign,
    pub method: Method,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    pub chunk: u64,
    pub limit_disc: i64,
    /// Checkpoint log, resumed if it exists.
    pub checkpoint: Option<PathBuf>,
}

impl ScanConfig {
    pub fn new(xmax: u64, sign: Sign, method: Method) -> Self {
        ScanConfig { xmax, sign, method, jobs: 0, chunk: DEFAULT_CHUNK, limit_disc: DEFAULT_DISC_LIMIT, checkpoint: None }
    }

    fn header(&self) -> String {
        format!("# spingen-density xmax={} sign={} method={} chunk={}", self.xmax, self.sign, self.method, self.chunk)
    }

    fn ranges(&self) -> Vec<(u64, u64)> {
        (1..self.xmax).step_by(self.chunk as usize).map(|lo| (lo, (lo + self.chunk).min(self.xmax))).collect()
    }
}

/// Counts for |d| in lo..hi. Index i − 1 of `t_plus` counts d ≡ i mod 4.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeCounts {
    pub lo: u64,
    pub hi: u64,
    pub t_plus: [u64; 3],
    pub t_minus: [u64; 3],
    pub n_plus: u64,
    pub n_minus: u64,
}

impl RangeCounts {
    fn to_line(self) -> String {
        let t = |a: [u64; 3]| format!("{} {} {}", a[0], a[1], a[2]);
        format!("{} {} {} {} {} {}", self.lo, self.hi, t(self.t_plus), t(self.t_minus), self.n_plus, self.n_minus)
    }

    fn from_line(line: &str) -> Option<Self> {
        let v: Vec<u64> = line.split_whitespace().map(|x| x.parse().ok()).collect::<Option<_>>()?;
        (v.len() == 10).then(|| RangeCounts {
            lo: v[0],
            hi: v[1],
            t_plus: [v[2], v[3], v[4]],
            t_minus: [v[5], v[6], v[7]],
            n_plus: v[8],
            n_minus: v[9],
        })
    }
}

/// Counts indexed by the fundamental discriminant D of Q(√−d):
/// D ≡ 12 mod 16, D ≡ 8 mod 16 and D ≡ 1 mod 4.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FkCounts {
    pub d12_mod16: u64,
    pub d8_mod16: u64,
    pub d1_mod4: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub phi_half: f64,
    pub two_phi_half: f64,
    pub three_halves_phi_half: f64,
}

impl Reference {
    pub fn new() -> Self {
        let phi = euler_phi_half().to_f64().expect("finite");
        Reference { phi_half: phi, two_phi_half: 2.0 * phi, three_halves_phi_half: 1.5 * phi }
    }
}

impl Default for Reference {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub xmax: u64,
    pub sign: Sign,
    pub method: Method,
    pub t_plus: [u64; 3],
    pub t_minus: [u64; 3],
    pub total_plus: u64,
    pub total_minus: u64,
    pub n_plus: u64,
    pub n_minus: u64,
    pub alpha_plus: Option<f64>,
    pub alpha_minus: Option<f64>,
    pub alpha: Option<f64>,
    pub reference: Reference,
    /// Imaginary fields (d > 0), by D = disc of Q(√−d) < 0.
    pub fk_plus: FkCounts,
    /// Real fields (d < 0).
    pub fk_minus: FkCounts,
    pub ranges: usize,
}

fn ratio(t: u64, n: u64) -> Option<f64> {
    (n > 0).then(|| t as f64 / n as f64)
}

/// FK counts from d-indexed counts: d ≡ 1, 2, 3 mod 4 go to
/// D = −4d ≡ 12 mod 16, D = −4d ≡ 8 mod 16 and D = −d ≡ 1 mod 4.
fn fk_from(t: [u64; 3]) -> FkCounts {
    FkCounts { d12_mod16: t[0], d8_mod16: t[1], d1_mod4: t[2] }
}

impl DensityReport {
    fn assemble(cfg: &ScanConfig, parts: &BTreeMap<u64, RangeCounts>) -> Self {
        let mut t_plus = [0; 3];
        let mut t_minus = [0; 3];
        let (mut n_plus, mut n_minus) = (0, 0);
        for r in parts.values() {
            for i in 0..3 {
                t_plus[i] += r.t_plus[i];
                t_minus[i] += r.t_minus[i];
            }
            n_plus += r.n_plus;
            n_minus += r.n_minus;
        }
        let total_plus = t_plus.iter().sum();
        let total_minus = t_minus.iter().sum();
        DensityReport {
            xmax: cfg.xmax,
            sign: cfg.sign,
            method: cfg.method,
            t_plus,
            t_minus,
            total_plus,
            total_minus,
            n_plus,
            n_minus,
            alpha_plus: ratio(total_plus, n_plus),
            alpha_minus: ratio(total_minus, n_minus),
            alpha: ratio(total_plus + total_minus, n_plus + n_minus),
            reference: Reference::new(),
            fk_plus: fk_from(t_plus),
            fk_minus: fk_from(t_minus),
            ranges: parts.len(),
        }
    }
}

struct Classifier<'a> {
    method: Method,
    limit: i64,
    spf: Option<&'a SpfTable>,
}

impl Classifier<'_> {
    fn verdict(&self, d: i64) -> Result<bool> {
        let r = match self.method {
            Method::Oracle => rank4_of_d_with(d, self.limit, self.spf)?,
            Method::Redei => redei_rank4(fundamental_of_d(d))?,
        };
        Ok(r == 0)
    }
}

fn scan_range(lo: u64, hi: u64, sign: Sign, cls: &Classifier) -> Result<RangeCounts> {
    let bits = squarefree_segment(lo, hi);
    let mut out = RangeCounts { lo, hi, ..Default::default() };
    for i in bits.iter_ones() {
        let d = (lo + i as u64) as i64;
        if d < 2 {
            continue;
        }
        let class = (d % 4) as usize - 1;
        if sign.plus() {
            out.n_plus += 1;
            if cls.verdict(d)? {
                out.t_plus[class] += 1;
            }
        }
        if sign.minus() {
            out.n_minus += 1;
            if cls.verdict(-d)? {
                // −d ≡ 4 − (d mod 4)
                out.t_minus[2 - class] += 1;
            }
        }
    }
    Ok(out)
}

/// Read a checkpoint log, keeping only complete lines that lie on the
/// configured range grid, and rewrite it to exactly those lines.
fn load_checkpoint(cfg: &ScanConfig, path: &Path) -> Result<BTreeMap<u64, RangeCounts>> {
    let mut done = BTreeMap::new();
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        let mut lines = text.split_inclusive('\n').filter(|l| l.ends_with('\n'));
        match lines.next() {
            Some(h) if h.trim_end() == cfg.header() => {}
            Some(h) => {
                return Err(Error::Checkpoint(format!(
                    "{} was written for a different scan: {:?}, expected {:?}",
                    path.display(),
                    h.trim_end(),
                    cfg.header()
                )))
            }
            None => {}
        }
        let grid: BTreeMap<u64, u64> = cfg.ranges().into_iter().collect();
        for line in lines {
            if let Some(r) = RangeCounts::from_line(line) {
                if grid.get(&r.lo) == Some(&r.hi) {
                    done.insert(r.lo, r);
                }
            }
        }
    }
    let mut f = File::create(path)?;
    writeln!(f, "{}", cfg.header())?;
    for r in done.values() {
        writeln!(f, "{}", r.to_line())?;
    }
    f.sync_all()?;
    Ok(done)
}

/// Square-free scan of 0 < ±d < xmax.
pub fn scan(cfg: &ScanConfig) -> Result<DensityReport> {
    if cfg.xmax < 2 {
        return Err(Error::Parse("xmax must be at least 2".into()));
    }
    if cfg.chunk == 0 {
        return Err(Error::Parse("chunk must be positive".into()));
    }
    if cfg.method == Method::Redei {
        redei_gate(REDEI_GATE_LIMIT)?;
    }
    let mut done = match &cfg.checkpoint {
        Some(p) => load_checkpoint(cfg, p)?,
        None => BTreeMap::new(),
    };
    let todo: Vec<(u64, u64)> = cfg.ranges().into_iter().filter(|(lo, _)| !done.contains_key(lo)).collect();
    let spf = (cfg.method == Method::Oracle).then(|| SpfTable::new(4 * cfg.xmax / 3 + 1));
    let cls = Classifier { method: cfg.method, limit: cfg.limit_disc, spf: spf.as_ref() };
    let log = match &cfg.checkpoint {
        Some(p) => Some(Mutex::new(OpenOptions::new().append(true).open(p)?)),
        None => None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Parse(format!("thread pool: {e}")))?;
    let fresh: Vec<RangeCounts> = pool.install(|| {
        todo.par_iter()
            .map(|&(lo, hi)| {
                let r = scan_range(lo, hi, cfg.sign, &cls)?;
                if let Some(log) = &log {
                    let mut f = log.lock().expect("log lock");
                    writeln!(f, "{}", r.to_line())?;
                    f.flush()?;
                }
                Ok(r)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    for r in fresh {
        done.insert(r.lo, r);
    }
    Ok(DensityReport::assemble(cfg, &done))
}

/// FK counts computed directly over fundamental discriminants D, without
/// passing through d: D ≡ 12, 8 mod 16 with |D| < 4·xmax and D ≡ 1 mod 4
/// with |D| < xmax, of the sign of −d.
pub fn fk_counts_direct(xmax: u64, negative_disc: bool, limit: i64) -> Result<FkCounts> {
    let sign = if negative_disc { -1 } else { 1 };
    let mut out = FkCounts::default();
    let fundamental = |disc: i64| -> bool {
        let m = disc.rem_euclid(16);
        let core = if m % 4 == 1 { disc } else { disc / 4 };
        crate::arith::is_squarefree(core) && (m % 4 == 1 || core.rem_euclid(4) != 1)
    };
    for a in 1..(4 * xmax as i64) {
        let disc = sign * a;
        let m = disc.rem_euclid(16);
        let slot = match m {
            12 => &mut out.d12_mod16,
            8 => &mut out.d8_mod16,
            _ if m % 4 == 1 && a < xmax as i64 => &mut out.d1_mod4,
            _ => continue,
        };
        if a == 4 || crate::arith::is_square(disc) || !fundamental(disc) {
            continue;
        }
        if class_group_with(disc, limit, None)?.rank4() == 0 {
            *slot += 1;
        }
    }
    Ok(out)
}

/// Number of admissible d with 0 < ±d < xmax (squarefree, not ±1).
pub fn count_admissible(xmax: u64, negative: bool) -> u64 {
    (2..xmax as i64).filter(|&d| check_d(if negative { -d } else { d }).is_ok()).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binaryforms::quadratic_verdict;

    #[test]
    fn sieve_examples() {
        let s = squarefree_sieve(10);
        let set: Vec<usize> = s.iter_ones().collect();
        assert_eq!(set, vec![1, 2, 3, 5, 6, 7, 10]);
        let s = squarefree_sieve(100_000);
        let oracle = (1..=100_000i64).filter(|&n| crate::arith::is_squarefree(n)).count();
        assert_eq!(s.count_ones(), oracle);
        assert_eq!(oracle, 60794);
        let density = s.count_ones() as f64 / 1e5;
        assert!((density - 6.0 / std::f64::consts::PI.powi(2)).abs() < 0.001);
        // segments agree with the full sieve
        let seg = squarefree_segment(12_345, 23_456);
        for (i, b) in seg.iter().by_vals().enumerate() {
            assert_eq!(b, s[12_345 + i]);
        }
    }

    #[test]
    fn phi_half() {
        let phi = euler_phi_half().to_f64().unwrap();
        // two precisions of the same product
        let p32: f64 = (1..=32).map(|n| 1.0 - 0.5f64.powi(n)).product();
        let p200: f64 = (1..=200).map(|n| 1.0 - 0.5f64.powi(n)).product();
        assert!((p32 - p200).abs() < 1e-9);
        assert!((phi - p200).abs() < 1e-15);
        assert!((phi - 0.2887880951).abs() < 1e-10);
        assert!((2.0 * phi - 0.5775761902).abs() < 1e-10);
        assert!((1.5 * phi - 0.4331821426).abs() < 1e-10);
    }

    #[test]
    fn small_scans() {
        let r = scan(&ScanConfig::new(17, Sign::Plus, Method::Oracle)).unwrap();
        // every d < 17 except 14, whose G_d = C_{−56} is cyclic of order 4
        assert_eq!(r.n_plus, 10);
        assert_eq!(r.total_plus, r.n_plus - 1);
        assert!(!quadratic_verdict(14).unwrap());
        let r = scan(&ScanConfig::new(100, Sign::Plus, Method::Oracle)).unwrap();
        let oracle = (2..100).filter(|&d| check_d(d).is_ok() && quadratic_verdict(d).unwrap()).count() as u64;
        assert_eq!(r.total_plus, oracle);
        for p in [17, 41, 73, 89, 97] {
            assert!(!quadratic_verdict(p).unwrap());
        }
        assert_eq!(r.n_plus, count_admissible(100, false));
    }

    #[test]
    fn partitioning_does_not_matter() {
        let mut a = ScanConfig::new(3000, Sign::Both, Method::Oracle);
        a.chunk = 7;
        a.jobs = 3;
        let mut b = ScanConfig::new(3000, Sign::Both, Method::Oracle);
        b.chunk = 1000;
        let (ra, rb) = (scan(&a).unwrap(), scan(&b).unwrap());
        assert_eq!(ra.t_plus, rb.t_plus);
        assert_eq!(ra.t_minus, rb.t_minus);
        assert_eq!((ra.n_plus, ra.n_minus), (rb.n_plus, rb.n_minus));
        assert_eq!(ra.n_minus, count_admissible(3000, true));
    }

    #[test]
    fn six_way_consistency() {
        let x = 1500;
        let r = scan(&ScanConfig::new(x, Sign::Both, Method::Oracle)).unwrap();
        assert_eq!(r.fk_plus, fk_counts_direct(x, true, DEFAULT_DISC_LIMIT).unwrap());
        assert_eq!(r.fk_minus, fk_counts_direct(x, false, DEFAULT_DISC_LIMIT).unwrap());
    }

    #[test]
    fn checkpoint_lines() {
        let r = RangeCounts { lo: 1, hi: 11, t_plus: [1, 2, 3], t_minus: [4, 5, 6], n_plus: 7, n_minus: 8 };
        assert_eq!(r.to_line(), "1 11 1 2 3 4 5 6 7 8");
        assert_eq!(RangeCounts::from_line(&r.to_line()), Some(r));
        assert_eq!(RangeCounts::from_line("1 11 1 2"), None);
    }
}
