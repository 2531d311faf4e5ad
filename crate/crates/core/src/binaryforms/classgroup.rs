//! Form class groups C_Δ under proper equivalence, with elementary
//! divisors computed from the ℓ-power maps of the group.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{check_discriminant, compose, cycle, reduce, BinaryForm};
use crate::arith::{divisors_u64, factor_u64, isqrt, SpfTable};
use crate::error::{Error, Result};

pub const DEFAULT_DISC_LIMIT: i64 = 8_000_000;

/// Multiplicative mixing hasher; forms are hashed a lot during scans.
#[derive(Default)]
struct MixHasher(u64);

impl Hasher for MixHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(b as u64);
        }
    }

    fn write_i64(&mut self, x: i64) {
        self.write_u64(x as u64);
    }

    fn write_u64(&mut self, x: u64) {
        self.0 = (self.0.rotate_left(23) ^ x).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    }
}

type FormMap = HashMap<BinaryForm, usize, BuildHasherDefault<MixHasher>>;

#[derive(Clone, Debug)]
pub struct FormClassGroup {
    disc: i64,
    reps: Vec<BinaryForm>,
    /// Every reduced form, mapped to its class.
    index: FormMap,
    identity: usize,
    structure: Vec<u64>,
    square: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinorCounts {
    /// |C / C⁴|: proper spinor genera in the whole form class group.
    pub total: u64,
    /// |C² / C⁴|: proper spinor genera in each genus.
    pub per_genus: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupSummary {
    pub disc: i64,
    pub h: u64,
    pub structure: Vec<u64>,
    pub rank4: u32,
    pub spinor_per_genus: u64,
}

fn reduced_forms(disc: i64, spf: Option<&SpfTable>) -> Vec<BinaryForm> {
    let mut out = Vec::new();
    let parity = disc.rem_euclid(2);
    let primitive = |a: i64, b: i64, c: i64| a.gcd(&b).gcd(&c) == 1;
    if disc < 0 {
        let bmax = isqrt((-disc / 3) as u64) as i64;
        for b in (parity..=bmax).step_by(2) {
            let n = ((b * b - disc) / 4) as u64;
            for a in divisors_u64(n, spf) {
                let (a, c) = (a as i64, (n / a) as i64);
                if a < b.max(1) || a > c || !primitive(a, b, c) {
                    continue;
                }
                out.push(BinaryForm { a, b, c });
                if b > 0 && b < a && a < c {
                    out.push(BinaryForm { a, b: -b, c });
                }
            }
        }
    } else {
        let s = isqrt(disc as u64) as i64;
        let start = if parity == 0 { 2 } else { 1 };
        for b in (start..=s).step_by(2) {
            let n = ((disc - b * b) / 4) as u64;
            for a in divisors_u64(n, spf) {
                let (a, c) = (a as i64, (n / a) as i64);
                if 2 * a + b <= s || 2 * a - b > s || !primitive(a, b, c) {
                    continue;
                }
                out.push(BinaryForm { a, b, c: -c });
                out.push(BinaryForm { a: -a, b, c });
            }
        }
    }
    out
}

impl FormClassGroup {
    fn build(disc: i64, spf: Option<&SpfTable>) -> Result<Self> {
        let forms = reduced_forms(disc, spf);
        let mut index = FormMap::default();
        let mut reps = Vec::new();
        if disc < 0 {
            for (i, f) in forms.into_iter().enumerate() {
                index.insert(f, i);
                reps.push(f);
            }
        } else {
            for f in forms {
                if index.contains_key(&f) {
                    continue;
                }
                let id = reps.len();
                let cyc = cycle(&f);
                reps.push(*cyc.iter().min().expect("nonempty"));
                for g in cyc {
                    index.insert(g, id);
                }
            }
        }
        let principal = reduce(&BinaryForm::principal(disc)?)?;
        let identity = index[&principal];
        let mut g = FormClassGroup { disc, reps, index, identity, structure: Vec::new(), square: Vec::new() };
        g.square = (0..g.h_usize()).map(|x| g.mul(x, x)).collect();
        g.structure = g.compute_structure();
        Ok(g)
    }

    fn h_usize(&self) -> usize {
        self.reps.len()
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn h(&self) -> u64 {
        self.reps.len() as u64
    }

    /// One representative per class (the least form on the cycle for Δ > 0).
    pub fn representatives(&self) -> &[BinaryForm] {
        &self.reps
    }

    /// Elementary divisors d₁ | d₂ | ...; empty for the trivial group.
    pub fn structure(&self) -> &[u64] {
        &self.structure
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Class index of any form of this discriminant.
    pub fn class_of(&self, f: &BinaryForm) -> Result<usize> {
        if f.disc() != self.disc {
            return Err(Error::DiscriminantMismatch(self.disc, f.disc()));
        }
        Ok(self.index[&reduce(f)?])
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        let f = compose(&self.reps[x], &self.reps[y]).expect("same discriminant");
        self.index[&f]
    }

    pub fn pow(&self, x: usize, mut k: u64) -> usize {
        let mut acc = self.identity;
        let mut base = x;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            k >>= 1;
            if k > 0 {
                base = if base < self.square.len() { self.square[base] } else { self.mul(base, base) };
            }
        }
        acc
    }

    fn compute_structure(&self) -> Vec<u64> {
        let h = self.h_usize();
        let mut parts: Vec<Vec<u64>> = Vec::new();
        for (l, k) in factor_u64(h as u64) {
            let step: Vec<usize> = if l == 2 { self.square.clone() } else { (0..h).map(|x| self.pow(x, l)).collect() };
            let full = l.pow(k) as usize;
            let mut y: Vec<usize> = (0..h).collect();
            let mut ranks = vec![0u32];
            loop {
                y.iter_mut().for_each(|t| *t = step[*t]);
                let cnt = y.iter().filter(|&&t| t == self.identity).count();
                ranks.push(cnt.ilog(l as usize));
                if cnt == full {
                    break;
                }
            }
            // at_least[j] = number of cyclic factors of order ≥ l^(j+1)
            let at_least: Vec<u32> = ranks.windows(2).map(|w| w[1] - w[0]).collect();
            let mut exps = Vec::new();
            for (j, &n) in at_least.iter().enumerate() {
                let next = at_least.get(j + 1).copied().unwrap_or(0);
                for _ in 0..(n - next) {
                    exps.push(l.pow(j as u32 + 1));
                }
            }
            exps.sort_unstable_by(|a, b| b.cmp(a));
            parts.push(exps);
        }
        let t = parts.iter().map(Vec::len).max().unwrap_or(0);
        let mut out: Vec<u64> = (0..t).map(|i| parts.iter().map(|p| p.get(i).copied().unwrap_or(1)).product()).collect();
        out.reverse();
        debug_assert_eq!(out.iter().product::<u64>(), h as u64);
        out
    }

    /// Number of elementary divisors divisible by 4.
    pub fn rank4(&self) -> u32 {
        self.structure.iter().filter(|&&d| d % 4 == 0).count() as u32
    }

    /// 2-rank of the subgroup of squares, computed from the group law.
    pub fn rank4_via_squares(&self) -> u32 {
        let mut in_image = vec![false; self.h_usize()];
        for &s in &self.square {
            in_image[s] = true;
        }
        let two_torsion = (0..self.h_usize()).filter(|&s| in_image[s] && self.square[s] == self.identity).count();
        two_torsion.ilog2()
    }

    /// Size of {x^k : x ∈ C}.
    pub fn power_image_size(&self, k: u64) -> usize {
        let mut seen = vec![false; self.h_usize()];
        for x in 0..self.h_usize() {
            seen[self.pow(x, k)] = true;
        }
        seen.into_iter().filter(|&b| b).count()
    }

    pub fn spinor_counts(&self) -> SpinorCounts {
        SpinorCounts {
            total: self.structure.iter().map(|d| d.gcd(&4)).product(),
            per_genus: 1 << self.rank4(),
        }
    }

    pub fn summary(&self) -> ClassGroupSummary {
        ClassGroupSummary {
            disc: self.disc,
            h: self.h(),
            structure: self.structure.clone(),
            rank4: self.rank4(),
            spinor_per_genus: self.spinor_counts().per_genus,
        }
    }
}

pub fn class_group(disc: i64) -> Result<FormClassGroup> {
    class_group_with(disc, DEFAULT_DISC_LIMIT, None)
}

/// Class group with an explicit |Δ| limit and an optional factor table
/// covering |Δ|/3.
pub fn class_group_with(disc: i64, limit: i64, spf: Option<&SpfTable>) -> Result<FormClassGroup> {
    check_discriminant(disc)?;
    if disc.abs() > limit {
        return Err(Error::DiscLimitExceeded { disc, limit });
    }
    FormClassGroup::build(disc, spf)
}
