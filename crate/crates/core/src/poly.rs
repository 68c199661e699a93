//! Dense univariate polynomials over ℚ with Sturm-sequence root isolation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Coefficients in ascending degree, never with a trailing zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

/// Location of one real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootBracket {
    Exact(BigRational),
    /// The unique root lies strictly inside; the polynomial has opposite,
    /// nonzero signs at the two endpoints.
    Open(BigRational, BigRational),
}

impl RootBracket {
    pub fn to_interval(&self) -> Interval {
        match self {
            RootBracket::Exact(q) => Interval::point(q.clone()),
            RootBracket::Open(lo, hi) => Interval::new(lo.clone(), hi.clone()),
        }
    }
}

pub(crate) fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    pub fn x() -> Self {
        Poly::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        sign(&self.eval(x))
    }

    pub fn eval_interval(&self, x: &Interval) -> Interval {
        let mut acc = Interval::point(BigRational::zero());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &Interval::point(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * q(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Poly::zero(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if sd < dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = &rem[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, u)` with `u·a ≡ g (mod m)`, `g` the monic gcd of `a` and `m`.
    pub fn gcd_inverse(a: &Poly, m: &Poly) -> (Poly, Poly) {
        let (mut r0, mut r1) = (m.clone(), a.clone());
        let (mut s0, mut s1) = (Poly::zero(), Poly::constant(BigRational::one()));
        while !r1.is_zero() {
            let (quot, rem) = r0.div_rem(&r1);
            let s2 = s0.sub(&quot.mul(&s1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        let lead = r0.leading().cloned().unwrap_or_else(BigRational::one);
        let inv = lead.recip();
        (r0.scale(&inv), s0.scale(&inv))
    }

    pub fn is_squarefree(&self) -> bool {
        Poly::gcd(self, &self.derivative()).degree() == Some(0)
    }

    pub fn squarefree_part(&self) -> Poly {
        let g = Poly::gcd(self, &self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Standard Sturm chain p, p', -rem(...), ...
    pub fn sturm_chain(&self) -> Vec<Poly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.scale(&q(-1)));
        }
        chain
    }

    /// Cauchy bound: every real root has absolute value below it.
    pub fn root_bound(&self) -> BigRational {
        let lead = self.leading().expect("zero polynomial has no roots");
        let max = self
            .coeffs
            .iter()
            .map(|c| (c / lead).abs())
            .max()
            .unwrap_or_else(BigRational::zero);
        max + BigRational::one()
    }

    /// Isolates all distinct real roots, ascending.
    pub fn real_roots(&self) -> Vec<RootBracket> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sf = self.squarefree_part();
        let chain = sf.sturm_chain();
        let bound = sf.root_bound();
        let lo = -bound.clone();
        let count = sturm_count(&chain, &lo, &bound);
        let mut out = Vec::new();
        isolate(&sf, &chain, lo, bound, count, &mut out);
        out
    }

    pub fn parse(text: &str) -> Result<Poly> {
        parse_poly(text)
    }
}

pub(crate) fn sign(x: &BigRational) -> Ordering {
    if x.is_zero() {
        Ordering::Equal
    } else if x.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

fn sign_changes(chain: &[Poly], x: &BigRational) -> usize {
    let mut last = Ordering::Equal;
    let mut changes = 0;
    for p in chain {
        let s = p.sign_at(x);
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Number of distinct roots in the half-open interval (a, b].
pub(crate) fn sturm_count(chain: &[Poly], a: &BigRational, b: &BigRational) -> usize {
    sign_changes(chain, a) - sign_changes(chain, b)
}

fn isolate(
    f: &Poly,
    chain: &[Poly],
    mut lo: BigRational,
    mut hi: BigRational,
    count: usize,
    out: &mut Vec<RootBracket>,
) {
    match count {
        0 => {}
        1 => {
            if f.sign_at(&hi) == Ordering::Equal {
                out.push(RootBracket::Exact(hi));
                return;
            }
            // `lo` may be the root of the neighbouring bracket.
            while f.sign_at(&lo) == Ordering::Equal {
                let mid = (&lo + &hi) / q(2);
                if f.sign_at(&mid) == Ordering::Equal {
                    out.push(RootBracket::Exact(mid));
                    return;
                }
                if sturm_count(chain, &lo, &mid) == 1 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            out.push(RootBracket::Open(lo, hi));
        }
        _ => {
            let mid = (&lo + &hi) / q(2);
            let left = sturm_count(chain, &lo, &mid);
            isolate(f, chain, lo, mid.clone(), left, out);
            isolate(f, chain, mid, hi, count - left, out);
        }
    }
}

/// Bisects an open bracket of `f` until its width is at most `width`.
pub(crate) fn refine_bracket(f: &Poly, bracket: &RootBracket, width: &BigRational) -> RootBracket {
    let RootBracket::Open(lo, hi) = bracket else {
        return bracket.clone();
    };
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let s_lo = f.sign_at(&lo);
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / q(2);
        match f.sign_at(&mid) {
            Ordering::Equal => return RootBracket::Exact(mid),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    RootBracket::Open(lo, hi)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "({})", mag)?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

pub(crate) fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("bad rational '{text}'"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = t.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}

/// Parses expressions such as `x^2 - x - 1`, `2x^3+1/2x`, `x-1` (variable `x` or `t`).
fn parse_poly(text: &str) -> Result<Poly> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    let mut coeffs: Vec<BigRational> = Vec::new();
    for term in terms {
        let (neg, body) = match term.as_bytes().first() {
            Some(b'-') => (true, &term[1..]),
            Some(b'+') => (false, &term[1..]),
            _ => (false, term),
        };
        let (coef, power) = match body.find(['x', 't']) {
            None => (parse_rational(body)?, 0usize),
            Some(pos) => {
                let c = body[..pos].trim_end_matches('*');
                let c = if c.is_empty() {
                    BigRational::one()
                } else {
                    parse_rational(c)?
                };
                let rest = &body[pos + 1..];
                let p = if rest.is_empty() {
                    1
                } else if let Some(e) = rest.strip_prefix('^') {
                    e.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad exponent in '{term}'")))?
                } else {
                    return Err(Error::Parse(format!("bad term '{term}'")));
                };
                (c, p)
            }
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigRational::zero());
        }
        if neg {
            coeffs[power] -= coef;
        } else {
            coeffs[power] += coef;
        }
    }
    Ok(Poly::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let p = Poly::parse("x^2 - x - 1").unwrap();
        assert_eq!(p, Poly::from_ints(&[-1, -1, 1]));
        assert_eq!(p.to_string(), "x^2 - x - 1");
        assert_eq!(Poly::parse("x-1").unwrap(), Poly::from_ints(&[-1, 1]));
        assert_eq!(
            Poly::parse("1/2x^3 + 2*x").unwrap(),
            Poly::new(vec![q(0), q(2), q(0), BigRational::new(1.into(), 2.into())])
        );
        assert!(Poly::parse("x^").is_err());
        assert!(Poly::parse("").is_err());
    }

    #[test]
    fn division_and_gcd() {
        let f = Poly::from_ints(&[-1, 0, 1]); // x^2 - 1
        let g = Poly::from_ints(&[1, 1]); // x + 1
        let (quot, rem) = f.div_rem(&g);
        assert_eq!(quot, Poly::from_ints(&[-1, 1]));
        assert!(rem.is_zero());
        let h = Poly::from_ints(&[2, 3, 1]); // (x+1)(x+2)
        assert_eq!(Poly::gcd(&f, &h), g);
    }

    #[test]
    fn squarefree_detection() {
        let p = Poly::from_ints(&[1, 2, 1]);
        assert!(!p.is_squarefree());
        assert_eq!(p.squarefree_part(), Poly::from_ints(&[1, 1]));
        assert!(Poly::from_ints(&[-5, 0, 1]).is_squarefree());
    }

    #[test]
    fn isolates_sqrt2() {
        let roots = Poly::from_ints(&[-2, 0, 1]).real_roots();
        assert_eq!(roots.len(), 2);
        for (r, expect) in roots.iter().zip([-2f64.sqrt(), 2f64.sqrt()]) {
            let iv = r.to_interval();
            assert!(iv.lo_f64() <= expect && expect <= iv.hi_f64());
        }
    }

    #[test]
    fn isolates_close_and_rational_roots() {
        // (x - 1/2)(x - 1)(x - 1001/1000)
        let p = Poly::from_ints(&[-1, 2])
            .mul(&Poly::from_ints(&[-1, 1]))
            .mul(&Poly::new(vec![
                BigRational::new((-1001).into(), 1000.into()),
                q(1),
            ]));
        let roots = p.real_roots();
        assert_eq!(roots.len(), 3);
        let want = [0.5, 1.0, 1.001];
        for (r, w) in roots.iter().zip(want) {
            let iv = r.to_interval();
            assert!(iv.lo_f64() <= w && w <= iv.hi_f64(), "{iv:?} vs {w}");
        }
        // x^2 + 1 has none
        assert!(Poly::from_ints(&[1, 0, 1]).real_roots().is_empty());
    }

    #[test]
    fn inverse_mod() {
        let m = Poly::from_ints(&[-1, -1, 1]);
        let a = Poly::x();
        let (g, u) = Poly::gcd_inverse(&a, &m);
        assert_eq!(g, Poly::from_ints(&[1]));
        // x * (x - 1) = x^2 - x = 1 mod m
        assert_eq!(u, Poly::from_ints(&[-1, 1]));
    }
}
