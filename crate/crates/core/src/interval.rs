//! Closed intervals with rational endpoints, plus certified enclosures of
//! `sqrt`, `ln` and `arcosh`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::q;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    /// Panics if `lo > hi`.
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Interval::point(q(n))
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / q(2)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// `Some` once the sign is determined by the enclosure.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certain comparison against `other`, if the enclosures allow it.
    pub fn cmp_certain(&self, other: &Interval) -> Option<Ordering> {
        if rcmp(&self.hi, &other.lo) == Ordering::Less {
            Some(Ordering::Less)
        } else if rcmp(&self.lo, &other.hi) == Ordering::Greater {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            let m = if -&self.lo > self.hi {
                -&self.lo
            } else {
                self.hi.clone()
            };
            Interval {
                lo: BigRational::zero(),
                hi: m,
            }
        }
    }

    pub fn sqr(&self) -> Interval {
        let a = self.abs();
        Interval {
            lo: &a.lo * &a.lo,
            hi: &a.hi * &a.hi,
        }
    }

    pub fn recip(&self) -> Option<Interval> {
        if self.lo.is_positive() || self.hi.is_negative() {
            Some(Interval {
                lo: self.hi.recip(),
                hi: self.lo.recip(),
            })
        } else {
            None
        }
    }

    /// `None` when the divisor encloses zero.
    pub fn div(&self, other: &Interval) -> Option<Interval> {
        other.recip().map(|r| self * &r)
    }

    pub fn scale(&self, s: &BigRational) -> Interval {
        if s.is_negative() {
            Interval {
                lo: &self.hi * s,
                hi: &self.lo * s,
            }
        } else {
            Interval {
                lo: &self.lo * s,
                hi: &self.hi * s,
            }
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Widens outward to a grid of spacing `2^-prec`.
    pub fn round_out(&self, prec: u32) -> Interval {
        let s = BigInt::one() << prec;
        let lo = (&self.lo * &s).floor().to_integer();
        let hi = (&self.hi * &s).ceil().to_integer();
        Interval {
            lo: BigRational::new(lo, s.clone()),
            hi: BigRational::new(hi, s),
        }
    }

    pub fn lo_f64(&self) -> f64 {
        f64_down(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        f64_up(&self.hi)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }

    /// `log2` of the width rounded down; `None` for points.
    pub fn width_log2(&self) -> Option<i64> {
        let w = self.width();
        if w.is_zero() {
            return None;
        }
        Some(w.numer().bits() as i64 - w.denom().bits() as i64)
    }

    /// True when the width is at most `2^-bits`.
    pub fn narrower_than(&self, bits: u32) -> bool {
        let w = self.width();
        (w.numer() << bits) <= *w.denom()
    }

    pub fn sqrt(&self, prec: u32) -> Interval {
        let lo = if self.lo.is_positive() {
            sqrt_bounds(&self.lo, prec).0
        } else {
            BigRational::zero()
        };
        let hi = if self.hi.is_positive() {
            sqrt_bounds(&self.hi, prec).1
        } else {
            BigRational::zero()
        };
        Interval { lo, hi }
    }

    /// Requires a strictly positive enclosure.
    pub fn ln(&self, prec: u32) -> Interval {
        assert!(self.lo.is_positive(), "ln of non-positive interval");
        Interval {
            lo: ln_bounds(&self.lo, prec).0,
            hi: ln_bounds(&self.hi, prec).1,
        }
    }

    /// `arcosh` on the part of the interval inside `[1, ∞)`.
    pub fn arcosh(&self, prec: u32) -> Interval {
        Interval {
            lo: arcosh_bound(&self.lo, prec, false),
            hi: arcosh_bound(&self.hi, prec, true),
        }
    }
}

/// `ln(x + sqrt(x² - 1))` rounded down or up; 0 for `x ≤ 1`.
fn arcosh_bound(x: &BigRational, prec: u32, upper: bool) -> BigRational {
    let (a, b) = (x.numer(), x.denom());
    if a <= b {
        return BigRational::zero();
    }
    // sqrt((a² - b²)/b²) on the grid 2^-p
    let p = prec + 2;
    let (t, rem) = ((a * a - b * b) << (2 * p)).div_mod_floor(&(b * b));
    let mut r = t.sqrt();
    if upper && (&r * &r != t || !rem.is_zero()) {
        r += 1;
    }
    // x + r/2^p = (a·2^p + r·b) / (b·2^p)
    let num = (a << p) + &r * b;
    let den = b << p;
    let (l, h) = ln_fraction(&num, &den, p);
    if upper {
        h
    } else {
        l.max(BigRational::zero())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12}, {:.12}]", self.lo_f64(), self.hi_f64())
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        if self.is_point() && rhs.is_point() {
            return Interval::point(&self.lo * &rhs.lo);
        }
        let (a, b) = (self, rhs);
        let nonneg = |x: &Interval| !x.lo.is_negative();
        let nonpos = |x: &Interval| !x.hi.is_positive();
        match (nonneg(a), nonpos(a), nonneg(b), nonpos(b)) {
            (true, _, true, _) => Interval {
                lo: &a.lo * &b.lo,
                hi: &a.hi * &b.hi,
            },
            (true, _, _, true) => Interval {
                lo: &a.hi * &b.lo,
                hi: &a.lo * &b.hi,
            },
            (_, true, true, _) => Interval {
                lo: &a.lo * &b.hi,
                hi: &a.hi * &b.lo,
            },
            (_, true, _, true) => Interval {
                lo: &a.hi * &b.hi,
                hi: &a.lo * &b.lo,
            },
            _ => {
                let c = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
                let lo = c.iter().min_by(|x, y| rcmp(x, y)).unwrap().clone();
                let hi = c.iter().max_by(|x, y| rcmp(x, y)).unwrap().clone();
                Interval { lo, hi }
            }
        }
    }
}

/// Rational comparison by cross-multiplication (denominators are positive).
pub fn rcmp(a: &BigRational, b: &BigRational) -> Ordering {
    if a.denom() == b.denom() {
        return a.numer().cmp(b.numer());
    }
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

fn f64_down(x: &BigRational) -> f64 {
    let f = x.to_f64().unwrap_or(f64::NEG_INFINITY);
    match BigRational::from_float(f) {
        Some(r) if &r > x => f.next_down(),
        _ => f,
    }
}

fn f64_up(x: &BigRational) -> f64 {
    let f = x.to_f64().unwrap_or(f64::INFINITY);
    match BigRational::from_float(f) {
        Some(r) if &r < x => f.next_up(),
        _ => f,
    }
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

/// Lower and upper bounds on `sqrt(x)`, `x ≥ 0`, on the grid `2^-prec`.
pub fn sqrt_bounds(x: &BigRational, prec: u32) -> (BigRational, BigRational) {
    assert!(!x.is_negative());
    let s2 = pow2(2 * prec);
    let y = (x.numer() * &s2).div_floor(x.denom());
    let r = y.sqrt();
    let exact = &r * &r == y && (x.numer() * &s2).is_multiple_of(x.denom());
    let den = pow2(prec);
    let lo = BigRational::new(r.clone(), den.clone());
    let hi = if exact {
        lo.clone()
    } else {
        BigRational::new(r + 1, den)
    };
    (lo, hi)
}

/// Bounds on `artanh(zn/zd)` for `0 ≤ zn/zd ≤ 1/2`, as integers scaled by `2^p`.
fn artanh_scaled(zn: &BigInt, zd: &BigInt, p: u32) -> (BigInt, BigInt) {
    let s2 = pow2(2 * p);
    let zl = (zn << p).div_floor(zd);
    let zu = (zn << p).div_ceil(zd);
    let (zl2, zu2) = (&zl * &zl, &zu * &zu);
    let mut pl = zl.clone();
    let mut pu = zu.clone();
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let mut k = 1u64;
    loop {
        lo += &pl / BigInt::from(k);
        hi += div_ceil(&pu, &BigInt::from(k));
        if pu <= BigInt::one() {
            break;
        }
        pl = (&pl * &zl2) >> (2 * p);
        pu = div_ceil(&(&pu * &zu2), &s2);
        k += 2;
    }
    // Tail: later terms sum to at most pu·z²/(1-z²) ≤ pu/3.
    hi += 2;
    (lo, hi)
}

/// `artanh(1/3) = ln(2)/2`, cached per precision.
fn half_ln2_scaled(p: u32) -> (BigInt, BigInt) {
    static CACHE: OnceLock<Mutex<HashMap<u32, (BigInt, BigInt)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&p) {
        return v.clone();
    }
    let v = artanh_scaled(&BigInt::one(), &BigInt::from(3), p);
    cache.lock().unwrap().insert(p, v.clone());
    v
}

fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_ceil(b)
}

/// Lower and upper bounds on `ln(x)` for rational `x > 0`.
pub fn ln_bounds(x: &BigRational, prec: u32) -> (BigRational, BigRational) {
    assert!(x.is_positive());
    ln_fraction(x.numer(), x.denom(), prec)
}

/// `ln(n/d)` for positive integers, working on integers throughout.
fn ln_fraction(n: &BigInt, d: &BigInt, prec: u32) -> (BigRational, BigRational) {
    if n == d {
        return (BigRational::zero(), BigRational::zero());
    }
    // n/d = m·2^k with m in [1, 2)
    let mut k = n.bits() as i64 - d.bits() as i64;
    let (mut nn, mut dd) = if k >= 0 {
        (n.clone(), d << k as u64)
    } else {
        (n << (-k) as u64, d.clone())
    };
    if nn < dd {
        nn <<= 1;
        k -= 1;
    } else if nn >= (&dd << 1) {
        dd <<= 1;
        k += 1;
    }
    let kbits = 64 - k.unsigned_abs().leading_zeros();
    let p = prec + kbits + 12;
    // z = (m - 1)/(m + 1) ≤ 1/3
    let (al, ah) = artanh_scaled(&(&nn - &dd), &(&nn + &dd), p);
    let (ll, lh) = half_ln2_scaled(p);
    let kb = BigInt::from(k);
    let (kl, kh) = if k >= 0 {
        (&kb * &ll, &kb * &lh)
    } else {
        (&kb * &lh, &kb * &ll)
    };
    let den = pow2(p);
    let lo = BigRational::new(2 * (kl + al), den.clone());
    let hi = BigRational::new(2 * (kh + ah), den);
    (lo, hi)
}

/// Sign of an exact rational as `Ordering`.
pub fn rsign(x: &BigRational) -> Ordering {
    match x.numer().sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn arithmetic_encloses() {
        let a = Interval::new(r(-1, 1), r(2, 1));
        let b = Interval::new(r(3, 1), r(4, 1));
        let p = &a * &b;
        assert_eq!(p, Interval::new(r(-4, 1), r(8, 1)));
        assert_eq!(a.abs(), Interval::new(r(0, 1), r(2, 1)));
        assert!(a.recip().is_none());
        assert_eq!(b.recip().unwrap(), Interval::new(r(1, 4), r(1, 3)));
    }

    #[test]
    fn sqrt_and_ln_match_f64() {
        for &(n, d) in &[(2i64, 1i64), (1, 3), (10, 7), (123456, 1), (1, 1000)] {
            let x = r(n, d);
            let xf = n as f64 / d as f64;
            let (lo, hi) = sqrt_bounds(&x, 80);
            assert!(lo <= hi);
            assert!((lo.to_f64().unwrap() - xf.sqrt()).abs() < 1e-14 * xf.sqrt().max(1.0));
            let (lo, hi) = ln_bounds(&x, 80);
            assert!(hi.clone() - lo.clone() < r(1, 1 << 60));
            assert!((lo.to_f64().unwrap() - xf.ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn sqrt_exact_square() {
        let (lo, hi) = sqrt_bounds(&r(9, 4), 10);
        assert_eq!(lo, r(3, 2));
        assert_eq!(hi, r(3, 2));
    }

    #[test]
    fn ln2_digits() {
        let (lo, hi) = ln_bounds(&r(2, 1), 200);
        let s = BigRational::from_integer(pow2(60));
        // ln 2 = 0.693147180559945309417232121458...
        let want = r(693147180559945309, 1_000_000_000_000_000_000);
        assert!((lo.clone() - want.clone()).abs() * &s < BigRational::from_integer(2.into()));
        assert!(lo <= hi && &hi - &lo < r(1, 1 << 62));
    }

    #[test]
    fn arcosh_of_cosh() {
        // arcosh(5/4) = ln 2
        let a = Interval::point(r(5, 4)).arcosh(90);
        assert!((a.mid_f64() - 2f64.ln()).abs() < 1e-15);
        assert!(a.lo <= a.hi);
    }

    #[test]
    fn outward_f64() {
        let x = Interval::point(r(1, 3));
        assert!(x.lo_f64() < x.hi_f64());
        assert!(BigRational::from_float(x.lo_f64()).unwrap() <= r(1, 3));
        assert!(BigRational::from_float(x.hi_f64()).unwrap() >= r(1, 3));
    }
}
