//! Primitive binary quadratic forms ax² + bxy + cy², Gauss reduction,
//! indefinite cycles and Dirichlet composition.

mod classgroup;
mod quadratic;
mod redei;

pub use classgroup::{class_group, class_group_with, ClassGroupSummary, FormClassGroup, SpinorCounts, DEFAULT_DISC_LIMIT};
pub use quadratic::{
    check_d, fundamental_of_d, quadratic_report, quadratic_report_with, quadratic_trace_form, quadratic_verdict, rank4_of_d, rank4_of_d_with, QuadraticReport,
    QuadraticTraceForm,
};
pub use redei::{prime_discriminants, redei_gate, redei_rank4};

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{is_square, isqrt, xgcd};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

fn disc_of(a: i128, b: i128, c: i128) -> i128 {
    b * b - 4 * a * c
}

/// Validate a discriminant: nonsquare and congruent to 0 or 1 mod 4.
pub fn check_discriminant(disc: i64) -> Result<()> {
    if disc.rem_euclid(4) > 1 {
        return Err(Error::InvalidDiscriminant(disc));
    }
    if disc == 0 || is_square(disc) {
        return Err(Error::SquareDiscriminant(disc));
    }
    Ok(())
}

impl BinaryForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let d = disc_of(a as i128, b as i128, c as i128);
        let disc = i64::try_from(d).map_err(|_| Error::Parse(format!("discriminant of ({a}, {b}, {c}) overflows")))?;
        check_discriminant(disc)?;
        if a.gcd(&b).gcd(&c) != 1 {
            return Err(Error::ImprimitiveForm { a, b, c });
        }
        Ok(BinaryForm { a, b, c })
    }

    pub fn disc(&self) -> i64 {
        (self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128) as i64
    }

    /// The identity class: (1, 0, -Δ/4) or (1, 1, (1-Δ)/4).
    pub fn principal(disc: i64) -> Result<Self> {
        check_discriminant(disc)?;
        Ok(if disc.rem_euclid(4) == 0 {
            BinaryForm { a: 1, b: 0, c: -disc / 4 }
        } else {
            BinaryForm { a: 1, b: 1, c: (1 - disc) / 4 }
        })
    }

    pub fn inverse(&self) -> Self {
        BinaryForm { a: self.a, b: -self.b, c: self.c }
    }

    pub fn is_definite(&self) -> bool {
        self.disc() < 0
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        let disc = self.disc();
        if disc < 0 {
            a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
        } else {
            let s = isqrt(disc as u64) as i64;
            let a2 = 2 * a.abs();
            0 < b && b <= s && a2 + b > s && a2 - b <= s
        }
    }

    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

fn narrow(a: i128, b: i128, c: i128) -> BinaryForm {
    BinaryForm { a: a as i64, b: b as i64, c: c as i64 }
}

/// Reduce a positive definite form given with wide coefficients.
fn reduce_definite(mut a: i128, mut b: i128, mut c: i128) -> BinaryForm {
    let disc = disc_of(a, b, c);
    loop {
        // b into (-a, a]
        let two_a = 2 * a;
        let mut r = b.rem_euclid(two_a);
        if r > a {
            r -= two_a;
        }
        if r != b {
            b = r;
            c = (b * b - disc) / (4 * a);
        }
        if a > c {
            (a, b, c) = (c, -b, a);
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return narrow(a, b, c);
    }
}

/// One step of the indefinite reduction operator: (a, b, c) → (c, b', c')
/// with b' ≡ -b mod 2|c| chosen in the normal range.
fn rho_wide(a: i128, b: i128, c: i128, s: i128) -> (i128, i128, i128) {
    let disc = disc_of(a, b, c);
    let m = 2 * c.abs();
    let t = (-b).rem_euclid(m);
    let nb = if c.abs() > s {
        // representative in (-|c|, |c|]
        if t > c.abs() {
            t - m
        } else {
            t
        }
    } else {
        // representative in [s + 1 - 2|c|, s]
        let lo = s + 1 - m;
        lo + (t - lo).rem_euclid(m)
    };
    (c, nb, (nb * nb - disc) / (4 * c))
}

fn is_reduced_wide(a: i128, b: i128, s: i128) -> bool {
    let a2 = 2 * a.abs();
    0 < b && b <= s && a2 + b > s && a2 - b <= s
}

/// Proper-equivalence step on a reduced indefinite form.
pub fn rho(f: &BinaryForm) -> BinaryForm {
    let s = isqrt(f.disc() as u64) as i128;
    let (a, b, c) = rho_wide(f.a as i128, f.b as i128, f.c as i128, s);
    narrow(a, b, c)
}

fn reduce_wide(a: i128, b: i128, c: i128) -> Result<BinaryForm> {
    let disc = disc_of(a, b, c);
    if disc < 0 {
        if a < 0 {
            return Err(Error::NegativeDefinite);
        }
        return Ok(reduce_definite(a, b, c));
    }
    let s = isqrt(disc as u64) as i128;
    let (mut a, mut b, mut c) = (a, b, c);
    while !is_reduced_wide(a, b, s) {
        (a, b, c) = rho_wide(a, b, c, s);
    }
    Ok(narrow(a, b, c))
}

/// Reduced form properly equivalent to `f`. For Δ < 0 this is the unique
/// reduced representative; for Δ > 0 it is some form on the cycle of `f`.
pub fn reduce(f: &BinaryForm) -> Result<BinaryForm> {
    BinaryForm::new(f.a, f.b, f.c)?;
    reduce_wide(f.a as i128, f.b as i128, f.c as i128)
}

/// The ρ-cycle of a reduced indefinite form, starting at the form itself.
pub fn cycle(f: &BinaryForm) -> Vec<BinaryForm> {
    let mut out = vec![*f];
    let mut g = rho(f);
    while g != *f {
        out.push(g);
        g = rho(&g);
    }
    out
}

/// Canonical representative of the proper class: the reduced form for
/// Δ < 0, the least form on the reduced cycle for Δ > 0.
pub fn canonical(f: &BinaryForm) -> Result<BinaryForm> {
    let r = reduce(f)?;
    if r.disc() < 0 {
        Ok(r)
    } else {
        Ok(cycle(&r).into_iter().min().expect("cycle is nonempty"))
    }
}

pub fn equivalent(f: &BinaryForm, g: &BinaryForm) -> Result<bool> {
    if f.disc() != g.disc() {
        return Ok(false);
    }
    Ok(canonical(f)? == canonical(g)?)
}

/// Dirichlet composition followed by reduction.
pub fn compose(f: &BinaryForm, g: &BinaryForm) -> Result<BinaryForm> {
    let disc = f.disc();
    if g.disc() != disc {
        return Err(Error::DiscriminantMismatch(disc, g.disc()));
    }
    if disc < 0 && (f.a < 0 || g.a < 0) {
        return Err(Error::NegativeDefinite);
    }
    let (a, b, c) = compose_raw(f, g);
    reduce_wide(a, b, c)
}

/// Reduced form with a positive first coefficient, properly equivalent.
fn positive_leading(f: &BinaryForm) -> (i128, i128, i128) {
    let r = reduce_wide(f.a as i128, f.b as i128, f.c as i128).expect("validated form");
    let (a, b, c) = (r.a as i128, r.b as i128, r.c as i128);
    if a > 0 {
        (a, b, c)
    } else {
        (c, -b, a)
    }
}

/// Unreduced Dirichlet composition of two forms of the same discriminant.
/// With e = gcd(a1, a2, (b1+b2)/2) = u·a1 + v·a2 + w·(b1+b2)/2 the united
/// form has A = a1·a2/e² and B ≡ b1 mod 2a1/e, B ≡ b2 mod 2a2/e.
fn compose_raw(f: &BinaryForm, g: &BinaryForm) -> (i128, i128, i128) {
    let disc = f.disc() as i128;
    let (a1, b1, _) = positive_leading(f);
    let (a2, b2, _) = positive_leading(g);
    let beta = (b1 + b2) / 2;
    let (g1, u1, v1) = xgcd(a1, a2);
    let (e, x, w) = xgcd(g1, beta);
    let (u, v) = (u1 * x, v1 * x);
    let big_a = (a1 / e) * (a2 / e);
    let m = 2 * big_a;
    let t = u * a1 * b2 + v * a2 * b1 + w * ((b1 * b2 + disc) / 2);
    let big_b = (t / e).rem_euclid(m);
    let big_c = (big_b * big_b - disc) / (4 * big_a);
    (big_a, big_b, big_c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn f(a: i64, b: i64, c: i64) -> BinaryForm {
        BinaryForm::new(a, b, c).unwrap()
    }

    /// Reduced forms reachable from `g` by words of length ≤ depth in the
    /// generators S = [[0,-1],[1,0]] and T^±1.
    fn orbit_reduced(g: BinaryForm, depth: usize) -> HashSet<BinaryForm> {
        let mut seen = HashSet::from([g]);
        let mut frontier = vec![g];
        for _ in 0..depth {
            let mut next = Vec::new();
            for h in frontier {
                let (a, b, c) = (h.a, h.b, h.c);
                let moves = [(c, -b, a), (a, b + 2 * a, a + b + c), (a, b - 2 * a, a - b + c)];
                for (x, y, z) in moves {
                    let k = BinaryForm { a: x, b: y, c: z };
                    if seen.insert(k) {
                        next.push(k);
                    }
                }
            }
            frontier = next;
        }
        seen.into_iter().filter(BinaryForm::is_reduced).collect()
    }

    #[test]
    fn definite_reduction() {
        assert_eq!(reduce(&f(2, 2, 9)).unwrap(), f(2, 2, 9));
        assert_eq!(reduce(&f(9, 2, 2)).unwrap(), f(2, 2, 9));
        let oracle = orbit_reduced(f(9, 2, 2), 6);
        assert_eq!(oracle, HashSet::from([f(2, 2, 9)]));
        assert_eq!(reduce(&f(3, -2, 6)).unwrap(), f(3, -2, 6));
        assert_eq!(reduce(&f(-1, 0, -1)).unwrap_err().code(), "NEGATIVE_DEFINITE");
        assert_eq!(BinaryForm::new(2, 0, 2).unwrap_err().code(), "IMPRIMITIVE_FORM");
        assert_eq!(BinaryForm::new(1, 2, 1).unwrap_err().code(), "SQUARE_DISCRIMINANT");
    }

    #[test]
    fn indefinite_reduction_lands_on_principal_cycle() {
        let r = reduce(&f(1, 0, -2)).unwrap();
        assert!(r.is_reduced());
        let cyc = cycle(&r);
        assert!(cyc.contains(&f(1, 2, -1)), "{cyc:?}");
        // continued fraction oracle: √2 = [1; 2, 2, ...] has period 1, so the
        // cycle has two forms (signs alternate)
        assert_eq!(cyc.len(), 2);
        assert!(equivalent(&f(1, 0, -2), &f(-1, 2, 1)).unwrap());
    }

    #[test]
    fn united_form_congruences() {
        for disc in [-68i64, -84, -3 * 4 * 7 * 11, 229, 4 * 79, 1 - 4 * 101] {
            let forms: Vec<BinaryForm> = (1..40)
                .flat_map(|a| (-40..40).map(move |b| (a, b)))
                .filter_map(|(a, b)| {
                    let n = b * b - disc;
                    (n % (4 * a) == 0).then(|| BinaryForm::new(a, b, n / (4 * a)).ok()).flatten()
                })
                .take(30)
                .collect();
            for x in &forms {
                for y in &forms {
                    let (a1, b1, _) = positive_leading(x);
                    let (a2, b2, _) = positive_leading(y);
                    let (a, b, c) = compose_raw(x, y);
                    assert_eq!(b * b - 4 * a * c, disc as i128);
                    let e = a1 * a2 / a;
                    let e = (e as f64).sqrt() as i128;
                    assert_eq!((b - b1).rem_euclid(2 * a1 / e), 0);
                    assert_eq!((b - b2).rem_euclid(2 * a2 / e), 0);
                }
            }
        }
    }

    #[test]
    fn composition_examples() {
        assert_eq!(compose(&f(3, 2, 6), &f(3, -2, 6)).unwrap(), f(1, 0, 17));
        assert_eq!(compose(&f(3, 2, 6), &f(3, 2, 6)).unwrap(), f(2, 2, 9));
        let e = BinaryForm::principal(-68).unwrap();
        for g in [f(2, 2, 9), f(3, 2, 6), f(3, -2, 6)] {
            assert_eq!(compose(&e, &g).unwrap(), g);
        }
        assert_eq!(compose(&f(1, 0, 1), &f(1, 0, 2)).unwrap_err().code(), "DISCRIMINANT_MISMATCH");
    }

    #[test]
    fn composition_table_oracle_for_minus_68() {
        // direct oracle: f∘g is the class of forms representing f(x)g(y)
        // products; check the table is a Latin square with identity (1,0,17)
        let reps = [f(1, 0, 17), f(2, 2, 9), f(3, 2, 6), f(3, -2, 6)];
        for x in reps {
            let row: HashSet<_> = reps.iter().map(|y| compose(&x, y).unwrap()).collect();
            assert_eq!(row.len(), 4);
        }
        // values represented: a form representing m and one representing n
        // compose to a form representing m·n
        let g = compose(&f(3, 2, 6), &f(2, 2, 9)).unwrap();
        let vals: HashSet<i128> = (-6..=6).flat_map(|x| (-6..=6).map(move |y| (x, y))).map(|(x, y)| g.eval(x, y)).collect();
        assert!(vals.contains(&6));
    }
}
