//! Möbius transformations with entries in a totally real number field.

mod reflect;
mod schottky;

pub use reflect::{
    axis_reflections, compose_reflections, product_type_predict, projective_residual, Complex,
    ProductType, ReflectionLine,
};
pub use schottky::{schottky_powers, ArcSet, BoundaryArc, SchottkyCertificate};

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::numfield::{chebyshev_trace, FieldElement, NumberField};

pub const DEFAULT_ORDER_BOUND: u32 = 200;

/// Projective class of a determinant-one matrix `[[a, b], [c, d]]`.
///
/// Stored with its first nonzero entry positive under embedding 1 of the
/// field, so two elements are equal as transformations iff they are equal
/// as structs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MoebiusElement {
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
    d: FieldElement,
}

pub type RealMatrix = [[Interval; 2]; 2];

impl fmt::Debug for MoebiusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl MoebiusElement {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Result<Self> {
        let det = a.checked_mul(&d)?.checked_sub(&b.checked_mul(&c)?)?;
        if !det.is_int(1) {
            return Err(Error::NotUnimodular);
        }
        Ok(MoebiusElement { a, b, c, d }.canonical())
    }

    pub fn from_ints(field: &Arc<NumberField>, m: [[i64; 2]; 2]) -> Result<Self> {
        let e = |x| FieldElement::from_int(field, x);
        MoebiusElement::new(e(m[0][0]), e(m[0][1]), e(m[1][0]), e(m[1][1]))
    }

    pub fn identity(field: &Arc<NumberField>) -> Self {
        MoebiusElement::from_ints(field, [[1, 0], [0, 1]]).unwrap()
    }

    fn canonical(self) -> Self {
        let lead = [&self.a, &self.b, &self.c, &self.d]
            .into_iter()
            .find(|x| !x.is_zero())
            .map(|x| x.sign_at(1))
            .unwrap_or(Ordering::Greater);
        if lead == Ordering::Less {
            self.negated()
        } else {
            self
        }
    }

    fn negated(&self) -> Self {
        MoebiusElement {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.a.field()
    }

    pub fn entries(&self) -> [&FieldElement; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Trace of the canonical representative (defined up to sign).
    pub fn trace(&self) -> FieldElement {
        &self.a + &self.d
    }

    pub fn trace_sq(&self) -> FieldElement {
        self.trace().square()
    }

    pub fn is_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    pub fn mul(&self, o: &MoebiusElement) -> MoebiusElement {
        MoebiusElement {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
        .canonical()
    }

    pub fn inverse(&self) -> MoebiusElement {
        MoebiusElement {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
        .canonical()
    }

    pub fn pow(&self, n: i64) -> MoebiusElement {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = MoebiusElement::identity(self.field());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Canonical byte encoding used as a deduplication key.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(64);
        for x in self.entries() {
            x.encode(&mut out);
        }
        out
    }

    pub fn embed_matrix(&self, i: usize, bits: u32) -> Result<RealMatrix> {
        Ok([
            [self.a.embed(i, bits)?, self.b.embed(i, bits)?],
            [self.c.embed(i, bits)?, self.d.embed(i, bits)?],
        ])
    }

    pub fn to_f64(&self, i: usize) -> [[f64; 2]; 2] {
        [
            [self.a.to_f64(i), self.b.to_f64(i)],
            [self.c.to_f64(i), self.d.to_f64(i)],
        ]
    }

    pub fn to_json(&self) -> Value {
        json!([
            [self.a.coord_strings(), self.b.coord_strings()],
            [self.c.coord_strings(), self.d.coord_strings()],
        ])
    }

    pub fn from_json(field: &Arc<NumberField>, v: &Value) -> Result<Self> {
        let bad = || Error::BadSpec("matrix must be a 2x2 array of coordinate lists".into());
        let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
        let mut entries = Vec::new();
        for row in rows {
            let row = row.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
            for e in row {
                let coords: Vec<String> = match e {
                    Value::Array(cs) => cs
                        .iter()
                        .map(|c| match c {
                            Value::String(s) => Ok(s.clone()),
                            Value::Number(n) => Ok(n.to_string()),
                            _ => Err(bad()),
                        })
                        .collect::<Result<_>>()?,
                    Value::String(s) => vec![s.clone()],
                    Value::Number(n) => vec![n.to_string()],
                    _ => return Err(bad()),
                };
                entries.push(FieldElement::from_strings(field, &coords)?);
            }
        }
        let mut it = entries.into_iter();
        let (a, b, c, d) = (
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
        );
        MoebiusElement::new(a, b, c, d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ElementClass {
    Identity,
    EllipticFinite(u32),
    EllipticInfinite,
    Parabolic,
    Hyperbolic,
}

impl ElementClass {
    pub fn is_elliptic(self) -> bool {
        matches!(
            self,
            ElementClass::EllipticFinite(_) | ElementClass::EllipticInfinite
        )
    }

    pub fn label(self) -> String {
        match self {
            ElementClass::Identity => "identity".into(),
            ElementClass::EllipticFinite(k) => format!("elliptic-order-{k}"),
            ElementClass::EllipticInfinite => "elliptic-infinite".into(),
            ElementClass::Parabolic => "parabolic".into(),
            ElementClass::Hyperbolic => "hyperbolic".into(),
        }
    }
}

/// Type of `g` at embedding `i`, decided by the exact sign of `tr² - 4`.
///
/// For elliptic elements the order is the least `k ≤ order_bound` with
/// `g^k = ±I`; an elliptic `g` has `g^k = ±I` iff `tr(g^k) = ±2`, which is
/// checked with the exact trace recursion.
pub fn classify(g: &MoebiusElement, i: usize, order_bound: u32) -> ElementClass {
    if g.is_identity() {
        return ElementClass::Identity;
    }
    let t = g.trace();
    let disc = &t.square() - &FieldElement::from_int(g.field(), 4);
    match disc.sign_at(i) {
        Ordering::Greater => ElementClass::Hyperbolic,
        Ordering::Equal => ElementClass::Parabolic,
        Ordering::Less => {
            // A hyperbolic conjugate rules out finite order.
            let n = g.field().degree();
            if (1..=n).any(|j| j != i && disc.sign_at(j) == Ordering::Greater) {
                return ElementClass::EllipticInfinite;
            }
            let two = FieldElement::from_int(g.field(), 2);
            let mut prev = two.clone();
            let mut cur = t.clone();
            for k in 1..=order_bound {
                if cur.is_int(2) || cur.is_int(-2) {
                    return ElementClass::EllipticFinite(k);
                }
                let next = &(&t * &cur) - &prev;
                prev = cur;
                cur = next;
            }
            ElementClass::EllipticInfinite
        }
    }
}

/// `ℓ = 2 arcosh(|φ_i(tr)| / 2)`, or exactly 0 for non-hyperbolic classes.
pub fn translation_length(g: &MoebiusElement, i: usize, bits: u32) -> Result<Interval> {
    if classify(g, i, 1) != ElementClass::Hyperbolic {
        return Ok(Interval::from_int(0));
    }
    length_from_trace(&g.trace(), i, bits)
}

pub(crate) fn length_from_trace(t: &FieldElement, i: usize, bits: u32) -> Result<Interval> {
    let two = Interval::from_int(2);
    let mut prec = bits + 8;
    loop {
        let x = t.embed(i, prec)?.abs();
        let half = x.div(&two).unwrap();
        let one = BigRational::one();
        let half = Interval {
            lo: half.lo.max(one.clone()),
            hi: half.hi.max(one),
        };
        let l = half
            .arcosh(prec + 4)
            .scale(&BigRational::from_integer(2.into()));
        if l.narrower_than(bits) {
            return Ok(l);
        }
        prec += 32;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TupleClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
    Mixed,
}

/// The images `(φ_{i_1}(g), …, φ_{i_r}(g))` of one exact element.
#[derive(Clone, Debug)]
pub struct IsometryTuple {
    pub source: MoebiusElement,
    pub embeddings: Vec<usize>,
    pub factors: Vec<RealMatrix>,
    pub classes: Vec<ElementClass>,
    pub tuple_class: TupleClass,
}

pub fn tuple_embed(
    g: &MoebiusElement,
    embeddings: &[usize],
    bits: u32,
    order_bound: u32,
) -> Result<IsometryTuple> {
    let n = g.field().degree();
    for (k, &i) in embeddings.iter().enumerate() {
        if i == 0 || i > n {
            return Err(Error::BadIndex {
                index: i,
                degree: n,
            });
        }
        if embeddings[..k].contains(&i) {
            return Err(Error::BadSpec(format!("embedding {i} listed twice")));
        }
    }
    let factors = embeddings
        .iter()
        .map(|&i| g.embed_matrix(i, bits))
        .collect::<Result<Vec<_>>>()?;
    let classes: Vec<ElementClass> = embeddings
        .iter()
        .map(|&i| classify(g, i, order_bound))
        .collect();
    let tuple_class = tuple_class_of(&classes);
    Ok(IsometryTuple {
        source: g.clone(),
        embeddings: embeddings.to_vec(),
        factors,
        classes,
        tuple_class,
    })
}

pub fn tuple_class_of(classes: &[ElementClass]) -> TupleClass {
    if classes.iter().all(|c| *c == ElementClass::Identity) {
        TupleClass::Identity
    } else if classes.iter().all(|c| c.is_elliptic()) {
        TupleClass::Elliptic
    } else if classes.iter().all(|c| *c == ElementClass::Parabolic) {
        TupleClass::Parabolic
    } else if classes.iter().all(|c| *c == ElementClass::Hyperbolic) {
        TupleClass::Hyperbolic
    } else {
        TupleClass::Mixed
    }
}

/// A point of `ℝ ∪ {∞}`.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryPoint {
    Finite(Interval),
    Infinity,
}

impl BoundaryPoint {
    pub fn to_f64(&self) -> f64 {
        match self {
            BoundaryPoint::Finite(x) => x.mid_f64(),
            BoundaryPoint::Infinity => f64::INFINITY,
        }
    }

    /// Position on the circle `[0, 1)` under `x ↦ arctan(x)/π mod 1`, `∞ ↦ 1/2`.
    pub fn chart(&self) -> f64 {
        circle_chart(self.to_f64())
    }
}

pub fn circle_chart(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.5;
    }
    let t = x.atan() / std::f64::consts::PI;
    if t < 0.0 {
        t + 1.0
    } else {
        t
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FixedPoints {
    Hyperbolic {
        attracting: BoundaryPoint,
        repelling: BoundaryPoint,
    },
    Parabolic(BoundaryPoint),
    /// Interior fixed point `x + iy` of an elliptic element.
    Elliptic {
        x: Interval,
        y: Interval,
    },
}

/// Fixed points at embedding `i`. The attracting point is the limit of
/// `g^n(z)` for any `z` in the upper half-plane.
pub fn fixed_points(g: &MoebiusElement, i: usize, bits: u32) -> Result<FixedPoints> {
    if g.is_identity() {
        return Err(Error::BadSpec(
            "identity has no isolated fixed points".into(),
        ));
    }
    let k = g.field();
    let prec = bits + 16;
    let amd = &g.a - &g.d;
    let t = g.trace();
    let disc = &t.square() - &FieldElement::from_int(k, 4);
    let two = Interval::from_int(2);
    match disc.sign_at(i) {
        Ordering::Greater => {
            let a = g.a.embed(i, prec)?;
            let d = g.d.embed(i, prec)?;
            if g.c.is_zero() {
                // z ↦ a²z + ab; ∞ attracts iff |a| > |d|
                let other = BoundaryPoint::Finite(
                    g.b.embed(i, prec)?
                        .div(&(&d - &a))
                        .ok_or(Error::GeometryDegenerate)?,
                );
                let grows =
                    (&g.a.square() - &FieldElement::from_int(k, 1)).sign_at(i) == Ordering::Greater;
                return Ok(if grows {
                    FixedPoints::Hyperbolic {
                        attracting: BoundaryPoint::Infinity,
                        repelling: other,
                    }
                } else {
                    FixedPoints::Hyperbolic {
                        attracting: other,
                        repelling: BoundaryPoint::Infinity,
                    }
                });
            }
            let s = disc.embed(i, prec)?.sqrt(prec);
            let s = if t.sign_at(i) == Ordering::Less {
                -s
            } else {
                s
            };
            let c2 = &g.c.embed(i, prec)? * &two;
            let base = amd.embed(i, prec)?;
            let att = (&base + &s).div(&c2).ok_or(Error::GeometryDegenerate)?;
            let rep = (&base - &s).div(&c2).ok_or(Error::GeometryDegenerate)?;
            Ok(FixedPoints::Hyperbolic {
                attracting: BoundaryPoint::Finite(att),
                repelling: BoundaryPoint::Finite(rep),
            })
        }
        Ordering::Equal => {
            if g.c.is_zero() {
                return Ok(FixedPoints::Parabolic(BoundaryPoint::Infinity));
            }
            let x = amd.checked_div(&(&g.c + &g.c))?;
            Ok(FixedPoints::Parabolic(BoundaryPoint::Finite(
                x.embed(i, prec)?,
            )))
        }
        Ordering::Less => {
            let x = amd.checked_div(&(&g.c + &g.c))?.embed(i, prec)?;
            let s = (-&disc).embed(i, prec)?.sqrt(prec);
            let c2 = (&g.c.embed(i, prec)? * &two).abs();
            let y = s.div(&c2).ok_or(Error::GeometryDegenerate)?;
            Ok(FixedPoints::Elliptic { x, y })
        }
    }
}

/// Whether a translation-direction sample comes from a tuple whose factors
/// are all hyperbolic, or from a mixed tuple (some coordinates zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DirectionKind {
    Regular,
    Mixed,
}

/// A point `(ℓ_1 : … : ℓ_r)` of projective space, scaled so the largest
/// coordinate is exactly 1.
#[derive(Clone, Debug)]
pub struct Direction {
    pub coords: Vec<Interval>,
    pub lengths: Vec<Interval>,
    pub kind: DirectionKind,
    pub word: Option<String>,
    /// `x_1 ≥ x_k` for every k, decided exactly.
    pub first_dominates: bool,
}

impl Direction {
    /// `ℓ_k / ℓ_1` as an interval; `None` when `ℓ_1 = 0`.
    pub fn ratio(&self, k: usize) -> Option<Interval> {
        if self.lengths[0].is_point() && self.lengths[0].lo.is_zero() {
            return None;
        }
        self.lengths[k].div(&self.lengths[0])
    }

    pub fn coords_f64(&self) -> Vec<f64> {
        self.coords.iter().map(Interval::mid_f64).collect()
    }

    /// Builds a direction from raw non-negative lengths. `first_dominates`
    /// is set only when the interval comparison is conclusive.
    pub fn from_lengths(lengths: Vec<Interval>, word: Option<String>) -> Result<Direction> {
        let zero = Interval::from_int(0);
        if lengths.is_empty() || lengths.iter().any(|l| l.lo.is_negative()) {
            return Err(Error::NoTranslationDirection);
        }
        let best = (0..lengths.len())
            .max_by(|&a, &b| lengths[a].mid().cmp(&lengths[b].mid()).then(b.cmp(&a)))
            .unwrap();
        if lengths[best] == zero {
            return Err(Error::NoTranslationDirection);
        }
        let unit = Interval {
            lo: BigRational::zero(),
            hi: BigRational::one(),
        };
        let coords = lengths
            .iter()
            .enumerate()
            .map(|(k, l)| {
                if k == best || l == &lengths[best] {
                    Interval::from_int(1)
                } else {
                    let r = l.div(&lengths[best]).expect("positive");
                    r.intersect(&unit).unwrap_or(r)
                }
            })
            .collect();
        let first_dominates = lengths
            .iter()
            .all(|l| l == &lengths[0] || lengths[0].lo >= l.hi);
        let kind = if lengths.iter().any(|l| l == &zero) {
            DirectionKind::Mixed
        } else {
            DirectionKind::Regular
        };
        Ok(Direction {
            coords,
            lengths,
            kind,
            word,
            first_dominates,
        })
    }
}

pub fn translation_direction(t: &IsometryTuple, bits: u32) -> Result<Direction> {
    direction_from_classes(&t.source, &t.embeddings, &t.classes, bits)
}

pub(crate) fn direction_from_classes(
    g: &MoebiusElement,
    embeddings: &[usize],
    classes: &[ElementClass],
    bits: u32,
) -> Result<Direction> {
    let hyp: Vec<usize> = (0..classes.len())
        .filter(|&k| classes[k] == ElementClass::Hyperbolic)
        .collect();
    if hyp.is_empty() {
        return Err(Error::NoTranslationDirection);
    }
    let tsq = g.trace_sq();
    let mut best = hyp[0];
    for &k in &hyp[1..] {
        if tsq.cmp_conjugates(embeddings[k], embeddings[best]) == Ordering::Greater {
            best = k;
        }
    }
    let lengths = (0..classes.len())
        .map(|k| {
            if classes[k] == ElementClass::Hyperbolic {
                length_from_trace(&g.trace(), embeddings[k], bits + 4)
            } else {
                Ok(Interval::from_int(0))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let unit = Interval {
        lo: BigRational::zero(),
        hi: BigRational::one(),
    };
    let coords = (0..classes.len())
        .map(|k| {
            if k == best
                || (classes[k] == ElementClass::Hyperbolic
                    && tsq.cmp_conjugates(embeddings[k], embeddings[best]) == Ordering::Equal)
            {
                Interval::from_int(1)
            } else if classes[k] != ElementClass::Hyperbolic {
                Interval::from_int(0)
            } else {
                let r = lengths[k]
                    .div(&lengths[best])
                    .expect("hyperbolic length is positive");
                r.intersect(&unit).unwrap_or(r)
            }
        })
        .collect();
    let kind = if hyp.len() == classes.len() {
        DirectionKind::Regular
    } else {
        DirectionKind::Mixed
    };
    let first_dominates = classes[0] == ElementClass::Hyperbolic
        && hyp
            .iter()
            .all(|&k| tsq.cmp_conjugates(embeddings[k], embeddings[0]) != Ordering::Greater);
    Ok(Direction {
        coords,
        lengths,
        kind,
        word: None,
        first_dominates,
    })
}

/// `tr(g^2) = tr(g)^2 - 2`.
pub fn square_trace(g: &MoebiusElement) -> FieldElement {
    chebyshev_trace(2, &g.trace())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> Arc<NumberField> {
        NumberField::parse("x^2 - x - 1").unwrap()
    }

    fn t_s(k: &Arc<NumberField>, power: i64) -> MoebiusElement {
        let l = FieldElement::generator(k);
        let tp = &FieldElement::from_int(k, power) * &l;
        MoebiusElement::new(
            tp,
            FieldElement::from_int(k, -1),
            FieldElement::one(k),
            FieldElement::zero(k),
        )
        .unwrap()
    }

    #[test]
    fn canonical_sign_and_equality() {
        let k = golden();
        let g = MoebiusElement::from_ints(&k, [[-1, 0], [0, -1]]).unwrap();
        assert!(g.is_identity());
        let s = MoebiusElement::from_ints(&k, [[0, -1], [1, 0]]).unwrap();
        assert_eq!(s, s.inverse());
        assert!(s.mul(&s).is_identity());
        assert_eq!(
            MoebiusElement::from_ints(&k, [[2, 0], [0, 1]]).unwrap_err(),
            Error::NotUnimodular
        );
    }

    #[test]
    fn classification_examples() {
        let k = golden();
        let l = FieldElement::generator(&k);
        let t = MoebiusElement::new(
            FieldElement::one(&k),
            l.clone(),
            FieldElement::zero(&k),
            FieldElement::one(&k),
        )
        .unwrap();
        assert_eq!(classify(&t, 1, 200), ElementClass::Parabolic);
        assert_eq!(
            classify(&t_s(&k, 1), 1, 200),
            ElementClass::EllipticFinite(5)
        );
        assert_eq!(
            classify(&t_s(&k, 2), 2, 200),
            ElementClass::EllipticInfinite
        );
        assert_eq!(classify(&t_s(&k, 2), 1, 200), ElementClass::Hyperbolic);
    }

    #[test]
    fn translation_lengths() {
        let k = golden();
        let l1 = translation_length(&t_s(&k, 2), 1, 60).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((l1.mid_f64() - 2.0 * phi.acosh()).abs() < 1e-14);
        assert!(l1.narrower_than(60));
        let l4 = translation_length(&t_s(&k, 4), 1, 60).unwrap();
        assert!((l4.mid_f64() - 3.685460).abs() < 1e-6);
        assert_eq!(
            translation_length(&t_s(&k, 1), 1, 60).unwrap(),
            Interval::from_int(0)
        );
    }

    #[test]
    fn tuple_and_direction() {
        let k = golden();
        let tup = tuple_embed(&t_s(&k, 2), &[1, 2], 60, 200).unwrap();
        assert_eq!(
            tup.classes,
            vec![ElementClass::Hyperbolic, ElementClass::EllipticInfinite]
        );
        assert_eq!(tup.tuple_class, TupleClass::Mixed);
        let d = translation_direction(&tup, 60).unwrap();
        assert_eq!(d.coords, vec![Interval::from_int(1), Interval::from_int(0)]);
        assert_eq!(d.kind, DirectionKind::Mixed);

        let tup = tuple_embed(&t_s(&k, 4), &[1, 2], 60, 200).unwrap();
        assert_eq!(tup.tuple_class, TupleClass::Hyperbolic);
        let d = translation_direction(&tup, 60).unwrap();
        assert!((d.coords[1].mid_f64() - 0.3659).abs() < 1e-4);

        let id = tuple_embed(&MoebiusElement::identity(&k), &[1, 2], 60, 200).unwrap();
        assert_eq!(id.tuple_class, TupleClass::Identity);
        assert_eq!(
            translation_direction(&id, 60).unwrap_err(),
            Error::NoTranslationDirection
        );
    }

    #[test]
    fn fixed_point_examples() {
        let q = NumberField::rationals();
        let two = FieldElement::from_int(&q, 2);
        let half = two.inverse().unwrap();
        let diag =
            MoebiusElement::new(two, FieldElement::zero(&q), FieldElement::zero(&q), half).unwrap();
        match fixed_points(&diag, 1, 40).unwrap() {
            FixedPoints::Hyperbolic {
                attracting,
                repelling,
            } => {
                assert_eq!(attracting, BoundaryPoint::Infinity);
                assert_eq!(repelling.to_f64(), 0.0);
            }
            other => panic!("{other:?}"),
        }
        let k = golden();
        match fixed_points(&t_s(&k, 4), 1, 40).unwrap() {
            FixedPoints::Hyperbolic {
                attracting,
                repelling,
            } => {
                assert!((attracting.to_f64() - 6.3137).abs() < 1e-4);
                assert!((repelling.to_f64() - 0.1584).abs() < 1e-4);
            }
            other => panic!("{other:?}"),
        }
        let l = FieldElement::generator(&k);
        let t = MoebiusElement::new(
            FieldElement::one(&k),
            l,
            FieldElement::zero(&k),
            FieldElement::one(&k),
        )
        .unwrap();
        assert_eq!(
            fixed_points(&t, 1, 40).unwrap(),
            FixedPoints::Parabolic(BoundaryPoint::Infinity)
        );
        match fixed_points(&t_s(&k, 1), 1, 40).unwrap() {
            FixedPoints::Elliptic { x, y } => {
                // TS fixes λ/2 + i sin(π/5)
                assert!((x.mid_f64() - 0.809017).abs() < 1e-6);
                assert!((y.mid_f64() - (std::f64::consts::PI / 5.0).sin()).abs() < 1e-6);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_roundtrip() {
        let k = golden();
        let g = t_s(&k, 4);
        let v = g.to_json();
        assert_eq!(
            v,
            json!([[["0", "4"], ["-1", "0"]], [["1", "0"], ["0", "0"]]])
        );
        assert_eq!(MoebiusElement::from_json(&k, &v).unwrap(), g);
    }

    #[test]
    fn chart_is_continuous_at_infinity() {
        assert!((circle_chart(1e12) - 0.5).abs() < 1e-9);
        assert!((circle_chart(-1e12) - 0.5).abs() < 1e-9);
        assert_eq!(circle_chart(0.0), 0.0);
        assert_eq!(circle_chart(f64::INFINITY), 0.5);
    }
}
