//! Univariate polynomials over Q, with just enough machinery for trace
//! forms: Euclidean division, Sturm counting, discriminants and a small
//! irreducibility test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::factor_bigint;
use crate::error::{Error, Result};
use crate::lattice::determinant;

/// Dense polynomial with rational coefficients, lowest degree first, no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<BigRational>);

impl Poly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn from_ints(c: &[BigInt]) -> Self {
        Self::new(c.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        Poly::new(self.0.iter().map(|c| c * k).collect())
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.lead();
        let mut r = self.0.clone();
        let mut q = vec![BigRational::zero(); self.0.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let t = r.last().unwrap() / &lead;
            for (i, c) in d.0.iter().enumerate() {
                r[k + i] -= &t * c;
            }
            q[k] = t;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let l = a.lead().recip();
        a.scale(&l)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Sign of the polynomial at +∞ (or −∞).
    fn sign_at_infinity(&self, positive: bool) -> i32 {
        match self.degree() {
            None => 0,
            Some(d) => {
                let s = if self.lead().is_positive() { 1 } else { -1 };
                if positive || d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }
    }

    /// Sturm chain f, f', -rem(f, f'), ...
    pub fn sturm_chain(&self) -> Vec<Poly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        fn changes(signs: impl Iterator<Item = i32>) -> usize {
            let s: Vec<i32> = signs.filter(|&s| s != 0).collect();
            s.windows(2).filter(|w| w[0] != w[1]).count()
        }
        let chain = self.sturm_chain();
        let lo = changes(chain.iter().map(|p| p.sign_at_infinity(false)));
        let hi = changes(chain.iter().map(|p| p.sign_at_infinity(true)));
        lo - hi
    }
}

/// Resultant of two integer polynomials via the Sylvester matrix.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (k, c) in f.iter().rev().enumerate() {
            rows[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in g.iter().rev().enumerate() {
            rows[n + i][i + k] = c.clone();
        }
    }
    determinant(&rows)
}

/// Discriminant of a monic integer polynomial.
pub fn discriminant(f: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    let df: Vec<BigInt> = f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let r = resultant(f, &df);
    if (n * (n - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut out = vec![BigInt::one()];
    for (p, e) in factor_bigint(n)? {
        let mut next = Vec::new();
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= p;
            }
        }
        out = next;
    }
    Ok(out)
}

fn has_integer_root(f: &[BigInt]) -> Result<bool> {
    if f[0].is_zero() {
        return Ok(true);
    }
    let p = Poly::from_ints(f);
    for d in divisors(&f[0])? {
        for x in [d.clone(), -d] {
            if p.eval(&BigRational::from_integer(x)).is_zero() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Does a monic integer quartic split as a product of two monic integer
/// quadratics (x² + ax + b)(x² + cx + d)?
fn has_quadratic_factor(f: &[BigInt]) -> Result<bool> {
    let (c0, c1, c2, c3) = (&f[0], &f[1], &f[2], &f[3]);
    for b0 in divisors(c0)? {
        for b in [b0.clone(), -b0] {
            let d = c0 / &b;
            // a + c = c3 and ac = c2 - b - d, so a solves a² - c3·a + (c2 - b - d) = 0
            let k = c2 - &b - &d;
            let disc = c3 * c3 - BigInt::from(4) * &k;
            if disc.is_negative() {
                continue;
            }
            let s = disc.sqrt();
            if &s * &s != disc {
                continue;
            }
            for root in [c3 + &s, c3 - &s] {
                if root.is_odd() {
                    continue;
                }
                let a = root / 2;
                let c = c3 - &a;
                if &a * &d + &b * &c == *c1 {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Outcome of the irreducibility check for monic integer polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Proven,
    /// Degree above 4: only squarefreeness was checked.
    Assumed,
}

/// Irreducibility over Q of a monic integer polynomial: exhaustive for
/// degree ≤ 4 (Gauss's lemma reduces to integer factors), otherwise only
/// squarefreeness is checked.
pub fn check_irreducible(f: &[BigInt]) -> Result<Irreducibility> {
    let n = f.len().checked_sub(1).ok_or_else(|| Error::InvalidPolynomial("empty".into()))?;
    if n == 0 || !f[n].is_one() {
        return Err(Error::InvalidPolynomial("expected a monic polynomial of degree at least 1".into()));
    }
    let name = format_poly(f);
    if discriminant(f).is_zero() {
        return Err(Error::ReduciblePolynomial(format!("{name} has a repeated factor")));
    }
    if n >= 2 && has_integer_root(f)? {
        return Err(Error::ReduciblePolynomial(format!("{name} has a rational root")));
    }
    if n == 4 && has_quadratic_factor(f)? {
        return Err(Error::ReduciblePolynomial(format!("{name} is a product of two quadratics")));
    }
    Ok(if n <= 4 { Irreducibility::Proven } else { Irreducibility::Assumed })
}

/// Parse "x^3-x-1", "x^4 + 6*x^2 + 2" or a coefficient list "-1,-1,0,1"
/// (lowest degree first).
pub fn parse_poly(s: &str) -> Result<Vec<BigInt>> {
    let s = s.trim();
    let bad = |why: &str| Error::InvalidPolynomial(format!("{s:?}: {why}"));
    if !s.contains('x') {
        let c = s
            .trim_matches(|c| c == '[' || c == ']')
            .split(',')
            .map(|t| t.trim().parse::<BigInt>().map_err(|_| bad("bad coefficient")))
            .collect::<Result<Vec<_>>>()?;
        return trim(c).ok_or_else(|| bad("zero polynomial"));
    }
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in compact.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with('^') {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);
    for t in terms {
        let (sign, body) = match t.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, t.strip_prefix('+').unwrap_or(t)),
        };
        if body.is_empty() {
            return Err(bad("empty term"));
        }
        let (coef, power) = match body.find('x') {
            None => (body.parse::<BigInt>().map_err(|_| bad("bad constant"))?, 0usize),
            Some(at) => {
                let c = body[..at].trim_end_matches('*');
                let c = if c.is_empty() { BigInt::one() } else { c.parse().map_err(|_| bad("bad coefficient"))? };
                let rest = &body[at + 1..];
                let e = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .or_else(|| rest.strip_prefix("**"))
                        .and_then(|e| e.parse().ok())
                        .ok_or_else(|| bad("bad exponent"))?
                };
                (c, e)
            }
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigInt::zero());
        }
        coeffs[power] += coef * sign;
    }
    trim(coeffs).ok_or_else(|| bad("zero polynomial"))
}

fn trim(mut c: Vec<BigInt>) -> Option<Vec<BigInt>> {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    (!c.is_empty()).then_some(c)
}

/// Human-readable form, e.g. "x^3 - x - 1".
pub fn format_poly(f: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, c) in f.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let show_coef = !mag.is_one() || i == 0;
        if show_coef {
            out.push_str(&mag.to_string());
        }
        match i {
            0 => {}
            1 => out.push('x'),
            _ => out.push_str(&format!("x^{i}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Real-root count by bisection on sign changes over a fine grid of
    /// rationals; fine for the well-separated roots used here.
    fn grid_count(f: &[i64]) -> usize {
        let p = Poly::from_ints(&ints(f));
        let mut count = 0;
        let mut prev = p.eval(&BigRational::from_integer(BigInt::from(-100)));
        for k in -10000..=10000 {
            let x = BigRational::new(BigInt::from(k), BigInt::from(100));
            let y = p.eval(&x);
            if y.is_zero() {
                count += 1;
            } else if !prev.is_zero() && (y.is_positive() != prev.is_positive()) {
                count += 1;
            }
            prev = y;
        }
        count
    }

    #[test]
    fn sturm_counts() {
        for f in [&[-1, -1, 0, 1][..], &[1, -2, -1, 1], &[2, 0, 6, 0, 1], &[-2, 0, 0, 0, 1], &[-1, -1, 0, 0, 0, 1], &[1, 3, -3, -4, 1, 1]] {
            let n = Poly::from_ints(&ints(f)).count_real_roots();
            assert_eq!(n, grid_count(f), "{f:?}");
        }
        assert_eq!(Poly::from_ints(&ints(&[2, 0, 6, 0, 1])).count_real_roots(), 0);
        assert_eq!(Poly::from_ints(&ints(&[1, -3, 0, 1])).count_real_roots(), 3);
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant(&ints(&[-1, -1, 0, 1])), BigInt::from(-23));
        assert_eq!(discriminant(&ints(&[-17, 0, 1])), BigInt::from(68));
        // x^3 + a x + b: -4a^3 - 27b^2
        assert_eq!(discriminant(&ints(&[5, -3, 0, 1])), BigInt::from(-4 * -27 - 27 * 25));
        assert_eq!(discriminant(&ints(&[1, 0, 0, 0, 1])), BigInt::from(256));
    }

    #[test]
    fn irreducibility() {
        assert_eq!(check_irreducible(&ints(&[-1, -1, 0, 1])).unwrap(), Irreducibility::Proven);
        assert_eq!(check_irreducible(&ints(&[2, 0, 6, 0, 1])).unwrap(), Irreducibility::Proven);
        // (x^2+1)(x^2+2) and (x^2+x+1)(x^2-x+3)
        assert!(check_irreducible(&ints(&[2, 0, 3, 0, 1])).is_err());
        assert!(check_irreducible(&ints(&[3, 2, 3, 0, 1])).is_err());
        assert!(check_irreducible(&ints(&[-1, 0, 0, 1])).is_err());
        assert!(check_irreducible(&ints(&[1, 2, 1])).is_err());
        assert_eq!(check_irreducible(&ints(&[-1, -1, 0, 0, 0, 1])).unwrap(), Irreducibility::Assumed);
        assert_eq!(check_irreducible(&ints(&[2, 1])).unwrap(), Irreducibility::Proven);
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_poly("x^3-x-1").unwrap(), ints(&[-1, -1, 0, 1]));
        assert_eq!(parse_poly("-1,-1,0,1").unwrap(), ints(&[-1, -1, 0, 1]));
        assert_eq!(parse_poly("x^4 + 6*x^2 + 2").unwrap(), ints(&[2, 0, 6, 0, 1]));
        assert_eq!(parse_poly("x^4+8x^2+8x+22").unwrap(), ints(&[22, 8, 8, 0, 1]));
        assert_eq!(parse_poly("x**2 - 17").unwrap(), ints(&[-17, 0, 1]));
        assert!(parse_poly("x^").is_err());
        assert!(parse_poly("0,0").is_err());
        assert_eq!(format_poly(&ints(&[-1, -1, 0, 1])), "x^3 - x - 1");
        assert_eq!(parse_poly(&format_poly(&ints(&[22, 8, 8, 0, 1]))).unwrap(), ints(&[22, 8, 8, 0, 1]));
    }

    #[test]
    fn division_and_gcd() {
        let f = Poly::from_ints(&ints(&[2, 0, 3, 0, 1]));
        let g = Poly::from_ints(&ints(&[1, 0, 1]));
        let (q, r) = f.div_rem(&g);
        assert!(r.is_zero());
        assert_eq!(q, Poly::from_ints(&ints(&[2, 0, 1])));
        assert_eq!(f.gcd(&g), g);
    }
}
