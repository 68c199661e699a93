//! Totally real number fields in a power basis.
//!
//! Embeddings are numbered from 1 by *descending* root value, so embedding 1
//! is always the largest root of the defining polynomial.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::interval::{rsign, Interval};
use crate::poly::{parse_rational, q, refine_bracket, Poly, RootBracket};

/// Largest degree for which irreducibility is checked exhaustively.
pub const IRREDUCIBILITY_CHECK_MAX_DEGREE: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Irreducibility {
    Verified,
    Unverified,
}

struct CellState {
    level: u32,
    lo: BigRational,
    exact: Option<BigRational>,
    /// Projections already handed out, by level.
    projected: HashMap<u32, Interval>,
}

fn dyadic_exponent(d: &BigInt) -> Option<u64> {
    let tz = d.trailing_zeros()?;
    (d.bits() == tz + 1).then_some(tz)
}

/// One real root: an initial isolating interval plus a cache of its deepest
/// bisection. Interval at level `k` is the `k`-fold bisection of the initial
/// one, so every level is a sub-interval of all shallower levels.
struct RootCell {
    lo0: BigRational,
    w0: BigRational,
    sign_lo: Ordering,
    state: RwLock<CellState>,
}

impl RootCell {
    fn new(b: &RootBracket, f: &Poly) -> Self {
        match b {
            RootBracket::Exact(r) => RootCell {
                lo0: r.clone(),
                w0: BigRational::zero(),
                sign_lo: Ordering::Equal,
                state: RwLock::new(CellState {
                    level: 0,
                    lo: r.clone(),
                    exact: Some(r.clone()),
                    projected: HashMap::new(),
                }),
            },
            RootBracket::Open(lo, hi) => RootCell {
                lo0: lo.clone(),
                w0: hi - lo,
                sign_lo: f.sign_at(lo),
                state: RwLock::new(CellState {
                    level: 0,
                    lo: lo.clone(),
                    exact: None,
                    projected: HashMap::new(),
                }),
            },
        }
    }

    fn width_at(&self, level: u32) -> BigRational {
        &self.w0 / BigRational::from_integer(BigInt::one() << level)
    }

    fn interval(&self, level: u32, f: &Poly) -> Interval {
        {
            let st = self.state.read().unwrap();
            if let Some(r) = &st.exact {
                return Interval::point(r.clone());
            }
            if let Some(iv) = st.projected.get(&level) {
                return iv.clone();
            }
        }
        let mut st = self.state.write().unwrap();
        if st.exact.is_none() && st.level < level {
            let mut lo = st.lo.clone();
            let mut lvl = st.level;
            while lvl < level {
                let half = self.width_at(lvl + 1);
                let mid = &lo + &half;
                let s = f.sign_at(&mid);
                if s == Ordering::Equal {
                    st.exact = Some(mid);
                    break;
                }
                if s == self.sign_lo {
                    lo = mid;
                }
                lvl += 1;
            }
            if st.exact.is_none() {
                st.level = lvl;
                st.lo = lo;
            }
        }
        if let Some(r) = &st.exact {
            return Interval::point(r.clone());
        }
        let iv = self.project(&st.lo, level);
        st.projected.insert(level, iv.clone());
        iv
    }

    fn project(&self, deep_lo: &BigRational, level: u32) -> Interval {
        let w = self.width_at(level);
        let steps = ((deep_lo - &self.lo0) / &w).floor();
        let lo = &self.lo0 + steps * &w;
        let hi = &lo + &w;
        Interval::new(lo, hi)
    }
}

pub struct NumberField {
    minpoly: Poly,
    degree: usize,
    red_den: BigInt,
    red_rows: Vec<Vec<BigInt>>,
    roots: Vec<RootCell>,
    theta_f64: Vec<(f64, f64)>,
    irreducibility: Irreducibility,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({})", self.minpoly)
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly
    }
}

impl Eq for NumberField {}

/// Builds a field from the coefficients of a monic polynomial, ascending degree.
pub fn field_create(coeffs: &[BigRational]) -> Result<Arc<NumberField>> {
    NumberField::new(Poly::new(coeffs.to_vec()))
}

impl NumberField {
    pub fn new(minpoly: Poly) -> Result<Arc<NumberField>> {
        let degree = match minpoly.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::NotMonic),
        };
        if !minpoly.leading().unwrap().is_one() {
            return Err(Error::NotMonic);
        }
        if !minpoly.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        let brackets = minpoly.real_roots();
        if brackets.len() != degree {
            return Err(Error::NotTotallyReal {
                real_roots: brackets.len(),
                degree,
            });
        }
        let irreducibility = check_irreducible(&minpoly, &brackets)?;

        // rows[j] = x^(n+j) mod minpoly, j = 0..n-2
        let mut rows = Vec::new();
        let mut xp = Poly::constant(BigRational::one());
        for _ in 0..degree {
            xp = xp.mul(&Poly::x());
        }
        for _ in 0..degree.saturating_sub(1) {
            rows.push(xp.rem(&minpoly));
            xp = xp.mul(&Poly::x());
        }
        let mut red_den = BigInt::one();
        for r in &rows {
            for c in r.coeffs() {
                red_den = red_den.lcm(c.denom());
            }
        }
        let red_rows = rows
            .iter()
            .map(|r| {
                (0..degree)
                    .map(|k| (r.coeff(k) * BigRational::from_integer(red_den.clone())).to_integer())
                    .collect()
            })
            .collect();

        let mut roots: Vec<RootCell> = brackets
            .iter()
            .map(|b| RootCell::new(b, &minpoly))
            .collect();
        roots.reverse();
        let mut field = NumberField {
            minpoly,
            degree,
            red_den,
            red_rows,
            roots,
            theta_f64: Vec::new(),
            irreducibility,
        };
        field.theta_f64 = (0..degree)
            .map(|i| {
                let iv = field.root_at_width(i, 70);
                let mid = iv.mid_f64();
                let err = (iv.hi_f64() - iv.lo_f64()) + mid.abs() * f64::EPSILON;
                (mid, err)
            })
            .collect();
        Ok(Arc::new(field))
    }

    /// The field ℚ, presented as ℚ[x]/(x - 1).
    pub fn rationals() -> Arc<NumberField> {
        NumberField::new(Poly::from_ints(&[-1, 1])).expect("x - 1 defines Q")
    }

    pub fn parse(text: &str) -> Result<Arc<NumberField>> {
        NumberField::new(Poly::parse(text)?)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn minpoly(&self) -> &Poly {
        &self.minpoly
    }

    pub fn irreducibility(&self) -> Irreducibility {
        self.irreducibility
    }

    fn check_index(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.degree {
            Err(Error::BadIndex {
                index: i,
                degree: self.degree,
            })
        } else {
            Ok(i - 1)
        }
    }

    fn root_level(&self, idx: usize, level: u32) -> Interval {
        self.roots[idx].interval(level, &self.minpoly)
    }

    /// Enclosure of the `idx`-th root (0-based) of width at most `2^-bits`.
    fn root_at_width(&self, idx: usize, bits: u32) -> Interval {
        let mut level = 0;
        loop {
            let iv = self.root_level(idx, level);
            if iv.narrower_than(bits) {
                return iv;
            }
            level += 8;
        }
    }

    /// Certified enclosure of the `i`-th embedding of the generator.
    pub fn root(&self, i: usize, bits: u32) -> Result<Interval> {
        let idx = self.check_index(i)?;
        Ok(self.root_at_width(idx, bits))
    }

    pub fn root_f64(&self, i: usize) -> f64 {
        self.theta_f64[i - 1].0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "minpoly": self.minpoly_strings(),
            "unit": "rational strings, ascending degree",
        })
    }

    pub fn minpoly_strings(&self) -> Vec<String> {
        (0..=self.degree)
            .map(|k| self.minpoly.coeff(k).to_string())
            .collect()
    }

    pub fn from_json(v: &Value) -> Result<Arc<NumberField>> {
        let arr = v
            .get("minpoly")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("field JSON needs a \"minpoly\" array".into()))?;
        let coeffs = arr
            .iter()
            .map(|c| match c {
                Value::String(s) => parse_rational(s),
                Value::Number(n) => parse_rational(&n.to_string()),
                _ => Err(Error::Parse(
                    "minpoly entries must be rational strings".into(),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        field_create(&coeffs)
    }

    fn same(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

/// Exhaustive factor search: all roots are real and isolated, so a monic
/// factor corresponds to a subset of roots whose elementary symmetric
/// functions are integers (after clearing denominators).
fn check_irreducible(f: &Poly, brackets: &[RootBracket]) -> Result<Irreducibility> {
    let n = brackets.len();
    if n <= 1 {
        return Ok(Irreducibility::Verified);
    }
    let mut d = BigInt::one();
    for c in f.coeffs() {
        d = d.lcm(c.denom());
    }
    // g(y) = d^n f(y/d) is monic with integer coefficients; roots y = d·x.
    let dr = BigRational::from_integer(d.clone());
    let g = Poly::new(
        (0..=n)
            .map(|k| f.coeff(k) * BigRational::from_integer(num_traits::pow(d.clone(), n - k)))
            .collect(),
    );
    let max_k = if n > IRREDUCIBILITY_CHECK_MAX_DEGREE {
        2
    } else {
        n / 2
    };
    let mut width = BigRational::new(1.into(), 1024.into());
    let mut refined: Vec<Interval> = Vec::new();
    for k in 1..=max_k {
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            'attempt: loop {
                if refined.is_empty() {
                    refined = brackets
                        .iter()
                        .map(|b| refine_bracket(f, b, &width).to_interval().scale(&dr))
                        .collect();
                }
                let mut es = vec![Interval::from_int(1)];
                for &i in &subset {
                    // multiply polynomial of roots by (y - r_i)
                    let mut next = vec![Interval::from_int(0); es.len() + 1];
                    for (j, e) in es.iter().enumerate() {
                        next[j + 1] = &next[j + 1] + e;
                        next[j] = &next[j] - &(e * &refined[i]);
                    }
                    es = next;
                }
                let mut coeffs = Vec::new();
                for e in &es {
                    if e.width() >= BigRational::one() {
                        width = &width / q(1 << 16);
                        refined.clear();
                        continue 'attempt;
                    }
                    let c = e.lo.ceil();
                    if c > e.hi {
                        break 'attempt;
                    }
                    coeffs.push(c);
                }
                let factor = Poly::new(coeffs);
                if g.rem(&factor).is_zero() {
                    return Err(Error::NotIrreducible(format!("factor {factor} of {g}")));
                }
                break;
            }
            if !next_subset(&mut subset, n) {
                break;
            }
        }
    }
    Ok(if max_k < n / 2 {
        Irreducibility::Unverified
    } else {
        Irreducibility::Verified
    })
}

fn next_subset(s: &mut [usize], n: usize) -> bool {
    let k = s.len();
    for i in (0..k).rev() {
        if s[i] < n - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exact element `(num_0 + num_1 θ + … ) / den` of a number field.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<NumberField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den && self.field.same(&other.field)
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn field_arith(a: &FieldElement, b: &FieldElement, op: FieldOp) -> Result<FieldElement> {
    match op {
        FieldOp::Add => a.checked_add(b),
        FieldOp::Sub => a.checked_sub(b),
        FieldOp::Mul => a.checked_mul(b),
        FieldOp::Div => a.checked_div(b),
    }
}

/// `tr(g^l)` from `t = tr(g)` via `τ_{k+1} = t τ_k - τ_{k-1}`.
pub fn chebyshev_trace(l: u64, t: &FieldElement) -> FieldElement {
    let mut prev = t.field_int(2);
    if l == 0 {
        return prev;
    }
    let mut cur = t.clone();
    for _ in 1..l {
        let next = &(t * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

impl FieldElement {
    fn normalized(field: Arc<NumberField>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() && !g.is_zero() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den = &den / &g;
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        }
        FieldElement { field, num, den }
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        FieldElement::from_int(field, 0)
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        FieldElement::from_int(field, 1)
    }

    pub fn from_int(field: &Arc<NumberField>, n: i64) -> Self {
        FieldElement::from_rational(field, &q(n))
    }

    pub fn from_rational(field: &Arc<NumberField>, r: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); field.degree];
        num[0] = r.numer().clone();
        FieldElement::normalized(field.clone(), num, r.denom().clone())
    }

    /// The power-basis generator θ (a root of the defining polynomial).
    pub fn generator(field: &Arc<NumberField>) -> Self {
        if field.degree == 1 {
            let r = -field.minpoly.coeff(0);
            return FieldElement::from_rational(field, &r);
        }
        let mut num = vec![BigInt::zero(); field.degree];
        num[1] = BigInt::one();
        FieldElement::normalized(field.clone(), num, BigInt::one())
    }

    /// Coordinates in the basis 1, θ, …, θ^(n-1); shorter lists are zero padded.
    pub fn from_coords(field: &Arc<NumberField>, coords: &[BigRational]) -> Result<Self> {
        if coords.len() > field.degree {
            return Err(Error::Parse(format!(
                "{} coordinates for a degree-{} field",
                coords.len(),
                field.degree
            )));
        }
        let mut den = BigInt::one();
        for c in coords {
            den = den.lcm(c.denom());
        }
        let mut num = vec![BigInt::zero(); field.degree];
        for (k, c) in coords.iter().enumerate() {
            num[k] = (c * BigRational::from_integer(den.clone())).to_integer();
        }
        Ok(FieldElement::normalized(field.clone(), num, den))
    }

    pub fn from_ints(field: &Arc<NumberField>, coords: &[i64]) -> Self {
        let c: Vec<BigRational> = coords.iter().map(|&x| q(x)).collect();
        FieldElement::from_coords(field, &c).expect("too many coordinates")
    }

    pub fn from_strings(field: &Arc<NumberField>, coords: &[String]) -> Result<Self> {
        let c = coords
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        FieldElement::from_coords(field, &c)
    }

    /// Evaluates a rational polynomial at θ.
    pub fn from_poly(field: &Arc<NumberField>, p: &Poly) -> Self {
        let r = p.rem(&field.minpoly);
        FieldElement::from_coords(field, r.coeffs()).expect("reduced polynomial fits")
    }

    fn field_int(&self, n: i64) -> Self {
        FieldElement::from_int(&self.field, n)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn coord_strings(&self) -> Vec<String> {
        self.coords().iter().map(ToString::to_string).collect()
    }

    pub fn as_poly(&self) -> Poly {
        Poly::new(self.coords())
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.num.iter().skip(1).all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    pub fn is_int(&self, n: i64) -> bool {
        self.is_rational() && self.den.is_one() && self.num[0] == BigInt::from(n)
    }

    /// Compact byte encoding; equal elements of one field encode identically.
    pub fn encode(&self, out: &mut Vec<u8>) {
        for c in self.num.iter().chain(std::iter::once(&self.den)) {
            let b = c.to_signed_bytes_le();
            out.extend_from_slice(&(b.len() as u32).to_le_bytes());
            out.extend_from_slice(&b);
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field.same(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inverse()?))
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| {
                let (x, y) = (a * &other.den, b * &self.den);
                if negate {
                    x - y
                } else {
                    x + y
                }
            })
            .collect();
        FieldElement::normalized(self.field.clone(), num, &self.den * &other.den)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.field.degree;
        if self.is_rational() || other.is_rational() {
            let (r, e) = if self.is_rational() {
                (self, other)
            } else {
                (other, self)
            };
            let num = e.num.iter().map(|c| c * &r.num[0]).collect();
            return FieldElement::normalized(self.field.clone(), num, &self.den * &other.den);
        }
        let mut conv = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                conv[i + j] += a * b;
            }
        }
        let f = &self.field;
        let mut num: Vec<BigInt> = conv[..n].iter().map(|c| c * &f.red_den).collect();
        for (j, c) in conv[n..].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, r) in f.red_rows[j].iter().enumerate() {
                num[k] += c * r;
            }
        }
        FieldElement::normalized(self.field.clone(), num, &self.den * &other.den * &f.red_den)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(FieldElement::from_rational(&self.field, &r.recip()));
        }
        let (g, u) = Poly::gcd_inverse(&self.as_poly(), &self.field.minpoly);
        // g is 1 for irreducible minpolys; otherwise the element is a zero divisor.
        if g.degree() != Some(0) {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElement::from_poly(&self.field, &u))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.field_int(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Interval image under the embedding with 0-based index `idx` using the
    /// root enclosure of the given bisection level.
    fn embed_level(&self, idx: usize, level: u32) -> Interval {
        let theta = self.field.root_level(idx, level);
        if let Some(iv) = self.embed_dyadic(&theta) {
            return iv;
        }
        let mut acc = Interval::from_int(0);
        for c in self.num.iter().rev() {
            acc = &(&acc * &theta) + &Interval::point(BigRational::from_integer(c.clone()));
        }
        acc.scale(&BigRational::new(BigInt::one(), self.den.clone()))
    }

    /// Horner evaluation on integer numerators when both ends of `theta`
    /// have power-of-two denominators (always the case after bisecting a
    /// dyadic isolating interval). Avoids rational normalization.
    fn embed_dyadic(&self, theta: &Interval) -> Option<Interval> {
        if self.num.is_empty() {
            return None;
        }
        let e_lo = dyadic_exponent(theta.lo.denom())?;
        let e_hi = dyadic_exponent(theta.hi.denom())?;
        let e = e_lo.max(e_hi);
        let a = theta.lo.numer() << (e - e_lo);
        let b = theta.hi.numer() << (e - e_hi);
        // acc = [lo, hi] / 2^(e·k) after k steps
        let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
        let mut shift = 0u64;
        for c in self.num.iter().rev() {
            let p = [&lo * &a, &lo * &b, &hi * &a, &hi * &b];
            lo = p.iter().min().unwrap() + (c << shift);
            hi = p.iter().max().unwrap() + (c << shift);
            shift += e;
        }
        shift -= e;
        let den = &self.den << shift;
        Some(Interval {
            lo: BigRational::new(lo, den.clone()),
            hi: BigRational::new(hi, den),
        })
    }

    /// Certified enclosure of `φ_i(self)` of width at most `2^-bits`.
    ///
    /// The bisection level used grows monotonically with `bits`, so
    /// enclosures for larger `bits` are contained in those for smaller ones.
    pub fn embed(&self, i: usize, bits: u32) -> Result<Interval> {
        let idx = self.field.check_index(i)?;
        if self.is_rational() {
            return Ok(Interval::point(self.as_rational().unwrap()));
        }
        let mut level = 16 * (bits / 16).max(1);
        // skip levels that are certainly too coarse: the width is about
        // |p'(θ)| times the width of the root enclosure
        if let Some(extra) = self.width_gain_log2(idx) {
            while (level as i64) < bits as i64 + extra {
                level += 16;
            }
        }
        loop {
            let iv = self.embed_level(idx, level);
            if iv.narrower_than(bits) {
                return Ok(iv);
            }
            level += 16;
        }
    }

    /// `log2` of (derivative bound × initial root bracket width), rounded
    /// down; a lower estimate for the bits lost when evaluating.
    fn width_gain_log2(&self, idx: usize) -> Option<i64> {
        let (theta, _) = self.field.theta_f64[idx];
        let den = self.den.to_f64()?;
        let mut d = 0.0f64;
        let mut v = 0.0f64;
        for c in self.num.iter().rev() {
            d = d * theta + v;
            v = v * theta + c.to_f64()? / den;
        }
        let w0 = self.field.roots[idx].w0.to_f64()?;
        let g = (d.abs() * w0).log2();
        (g.is_finite() && w0 > 0.0).then(|| g.floor() as i64 - 1)
    }

    /// Floating-point approximation of `φ_i(self)`.
    pub fn to_f64(&self, i: usize) -> f64 {
        if let Some(r) = self.as_rational() {
            return r.to_f64().unwrap_or(f64::NAN);
        }
        match self.f64_filter(i - 1) {
            Some((v, _)) => v,
            None => self.embed(i, 64).map(|iv| iv.mid_f64()).unwrap_or(f64::NAN),
        }
    }

    /// Horner evaluation in floating point with a rigorous error bound.
    fn f64_filter(&self, idx: usize) -> Option<(f64, f64)> {
        let (theta, terr) = self.field.theta_f64[idx];
        let den = self.den.to_f64()?;
        let n = self.num.len();
        let ta = theta.abs() + terr;
        let mut v = 0.0f64;
        let mut mag = 0.0f64;
        let mut dmag = 0.0f64;
        for c in self.num.iter().rev() {
            let cf = c.to_f64()? / den;
            if !cf.is_finite() {
                return None;
            }
            v = v * theta + cf;
            dmag = dmag * ta + mag;
            mag = mag * ta + cf.abs();
        }
        let u = f64::EPSILON;
        let bound = 2.0 * (mag * (2.0 * n as f64 + 4.0) * u + dmag * terr);
        (v.is_finite() && bound.is_finite()).then_some((v, bound))
    }

    /// Exact sign of `φ_i(self)`.
    pub fn sign_at(&self, i: usize) -> Ordering {
        let idx = i - 1;
        if self.is_zero() {
            return Ordering::Equal;
        }
        if let Some(r) = self.as_rational() {
            return rsign(&r);
        }
        if let Some((v, b)) = self.f64_filter(idx) {
            if v.abs() > b {
                return if v > 0.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        let mut level = 32;
        loop {
            if let Some(s) = self.embed_level(idx, level).sign() {
                return s;
            }
            level += 32;
        }
    }

    /// Exact comparison of `φ_i(self)` with `φ_j(self)`.
    pub fn cmp_conjugates(&self, i: usize, j: usize) -> Ordering {
        if i == j || self.is_rational() {
            return Ordering::Equal;
        }
        let (a, b) = (i - 1, j - 1);
        for level in [24u32, 48, 96] {
            if let Some(o) = self
                .embed_level(a, level)
                .cmp_certain(&self.embed_level(b, level))
            {
                return o;
            }
        }
        // Possibly equal: locate both values among the distinct roots of the
        // characteristic polynomial.
        let cp = self.charpoly().squarefree_part();
        let brackets: Vec<Interval> = cp
            .real_roots()
            .iter()
            .map(RootBracket::to_interval)
            .collect();
        let locate = |idx: usize| -> usize {
            let mut level = 24;
            loop {
                let iv = self.embed_level(idx, level);
                let hits: Vec<usize> = (0..brackets.len())
                    .filter(|&k| brackets[k].overlaps(&iv))
                    .collect();
                if hits.len() == 1 {
                    return hits[0];
                }
                level += 24;
            }
        };
        locate(a).cmp(&locate(b))
    }

    /// Characteristic polynomial of multiplication by `self`.
    pub fn charpoly(&self) -> Poly {
        let n = self.field.degree;
        let theta = FieldElement::generator(&self.field);
        let mut cols = Vec::with_capacity(n);
        let mut cur = self.clone();
        for _ in 0..n {
            cols.push(cur.coords());
            cur = &cur * &theta;
        }
        // m[r][c] = coordinate r of self·θ^c
        let m: Vec<Vec<BigRational>> = (0..n)
            .map(|r| (0..n).map(|c| cols[c][r].clone()).collect())
            .collect();
        faddeev_leverrier(&m)
    }

    /// Exact trace down to ℚ.
    pub fn absolute_trace(&self) -> BigRational {
        let cp = self.charpoly();
        -cp.coeff(self.field.degree - 1)
    }
}

fn faddeev_leverrier(a: &[Vec<BigRational>]) -> Poly {
    let n = a.len();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut mk = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for r in 0..n {
            for c in 0..n {
                let mut s = BigRational::zero();
                for t in 0..n {
                    s += &a[r][t] * &mk[t][c];
                }
                if r == c {
                    s += &coeffs[n - k + 1];
                }
                next[r][c] = s;
            }
        }
        mk = next;
        let mut tr = BigRational::zero();
        for r in 0..n {
            for t in 0..n {
                tr += &a[r][t] * &mk[t][r];
            }
        }
        coeffs[n - k] = -tr / q(k as i64);
    }
    Poly::new(coeffs)
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.as_poly().to_string().replace('x', "a");
        write!(f, "{s}")
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    /// Panics if the operands live in different fields.
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.checked_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> Arc<NumberField> {
        NumberField::parse("x^2 - x - 1").unwrap()
    }

    #[test]
    fn creation_errors() {
        assert_eq!(NumberField::parse("2x^2 - 1").unwrap_err(), Error::NotMonic);
        assert_eq!(
            NumberField::parse("x^2 - 2x + 1").unwrap_err(),
            Error::NotSquarefree
        );
        assert_eq!(
            NumberField::parse("x^3 - 2").unwrap_err(),
            Error::NotTotallyReal {
                real_roots: 1,
                degree: 3
            }
        );
        assert!(matches!(
            NumberField::parse("x^2 - 4").unwrap_err(),
            Error::NotIrreducible(_)
        ));
        // (x^2 - 2)(x^2 - 3): no rational roots, quadratic factors
        assert!(matches!(
            NumberField::parse("x^4 - 5x^2 + 6").unwrap_err(),
            Error::NotIrreducible(_)
        ));
        // (x^2 - 2)(x^3 - 3x - 1)
        assert!(matches!(
            NumberField::parse("x^5 - 5x^3 - x^2 + 6x + 2").unwrap_err(),
            Error::NotIrreducible(_)
        ));
        // (x - 1/2)(x + 1/3) has rational roots
        assert!(matches!(
            NumberField::parse("x^2 - 1/6x - 1/6").unwrap_err(),
            Error::NotIrreducible(_)
        ));
    }

    #[test]
    fn golden_field_roots_descend() {
        let k = golden();
        assert_eq!(k.degree(), 2);
        assert_eq!(k.irreducibility(), Irreducibility::Verified);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let r1 = k.root(1, 60).unwrap();
        let r2 = k.root(2, 60).unwrap();
        assert!(r1.lo_f64() <= phi && phi <= r1.hi_f64());
        assert!(r2.lo_f64() <= 1.0 - phi && 1.0 - phi <= r2.hi_f64());
        assert!(matches!(k.root(3, 10), Err(Error::BadIndex { .. })));
    }

    #[test]
    fn golden_arith() {
        let k = golden();
        let l = FieldElement::generator(&k);
        assert_eq!(&l * &l, FieldElement::from_ints(&k, &[1, 1]));
        assert_eq!(l.checked_div(&l).unwrap(), FieldElement::one(&k));
        let inv = l.inverse().unwrap();
        assert_eq!(inv, FieldElement::from_ints(&k, &[-1, 1]));
        assert_eq!(
            FieldElement::zero(&k).inverse().unwrap_err(),
            Error::DivisionByZero
        );
        let other = NumberField::parse("x^2 - 2").unwrap();
        let s = FieldElement::generator(&other);
        assert_eq!(l.checked_add(&s).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn rational_denominators_in_minpoly() {
        let k = NumberField::parse("x^2 - 1/2").unwrap();
        let a = FieldElement::generator(&k);
        assert_eq!(
            &a * &a,
            FieldElement::from_coords(&k, &[BigRational::new(1.into(), 2.into())]).unwrap()
        );
        let b = &a.pow(3) + &a;
        let v = b.embed(1, 60).unwrap();
        let s = 0.5f64.sqrt();
        assert!((v.mid_f64() - (s * s * s + s)).abs() < 1e-15);
    }

    #[test]
    fn embedding_signs_and_comparisons() {
        let k = golden();
        let l = FieldElement::generator(&k);
        assert_eq!(l.sign_at(1), Ordering::Greater);
        assert_eq!(l.sign_at(2), Ordering::Less);
        assert_eq!(l.cmp_conjugates(1, 2), Ordering::Greater);
        assert_eq!(
            FieldElement::from_int(&k, 7).cmp_conjugates(1, 2),
            Ordering::Equal
        );
        let c = FieldElement::from_ints(&k, &[-1, 2]);
        assert_eq!(c.sign_at(2), Ordering::Less);
        // sqrt5 = 2λ - 1; its square is rational
        assert_eq!(c.square(), FieldElement::from_int(&k, 5));
        assert_eq!(c.square().cmp_conjugates(1, 2), Ordering::Equal);
    }

    #[test]
    fn equal_conjugates_in_a_quartic() {
        // Q(sqrt2, sqrt3) via x^4 - 10x^2 + 1; sqrt2 has equal conjugates in pairs
        let k = NumberField::parse("x^4 - 10x^2 + 1").unwrap();
        let t = FieldElement::generator(&k);
        // t = sqrt2 + sqrt3, t^2 = 5 + 2 sqrt6, so sqrt6 = (t^2 - 5)/2
        let s6 = (&t.square() - &FieldElement::from_int(&k, 5))
            .checked_div(&FieldElement::from_int(&k, 2))
            .unwrap();
        let mut equal = 0;
        for i in 1..=4 {
            for j in 1..=4 {
                if i != j && s6.cmp_conjugates(i, j) == Ordering::Equal {
                    equal += 1;
                }
            }
        }
        assert_eq!(equal, 4);
    }

    #[test]
    fn chebyshev_examples() {
        let k = golden();
        let t = FieldElement::generator(&k);
        assert_eq!(
            chebyshev_trace(2, &t),
            &t.square() - &FieldElement::from_int(&k, 2)
        );
        let two = FieldElement::from_int(&k, 2);
        for l in 0..6 {
            assert_eq!(chebyshev_trace(l, &two), two);
        }
        assert!(chebyshev_trace(3, &FieldElement::from_int(&k, 3)).is_int(18));
    }

    #[test]
    fn charpoly_of_generator_is_minpoly() {
        let k = NumberField::parse("x^3 - 3x + 1").unwrap();
        let t = FieldElement::generator(&k);
        assert_eq!(t.charpoly(), *k.minpoly());
        assert_eq!(t.absolute_trace(), q(0));
    }

    #[test]
    fn json_roundtrip() {
        let k = golden();
        let v = k.to_json();
        assert_eq!(v["minpoly"], json!(["-1", "-1", "1"]));
        let k2 = NumberField::from_json(&v).unwrap();
        assert_eq!(*k, *k2);
    }

    #[test]
    fn degree_one() {
        let k = NumberField::parse("x - 1").unwrap();
        assert_eq!(k.degree(), 1);
        let g = FieldElement::generator(&k);
        assert!(g.is_int(1));
        assert_eq!(g.embed(1, 30).unwrap(), Interval::from_int(1));
    }
}
