//! Ping-pong certificates for pairs of hyperbolic elements.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use super::{classify, fixed_points, ElementClass, FixedPoints, MoebiusElement, RealMatrix};
use crate::error::{Error, Result};
use crate::interval::Interval;

/// Closed arc of `ℝ ∪ {∞}` running counter-clockwise (increasing `x`,
/// wrapping through ∞ when `start > end`) between finite rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryArc {
    #[serde(serialize_with = "ser_rational")]
    pub start: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub end: BigRational,
}

fn ser_rational<S: serde::Serializer>(
    x: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl BoundaryArc {
    pub fn contains(&self, x: &BigRational) -> bool {
        if self.start <= self.end {
            &self.start <= x && x <= &self.end
        } else {
            x >= &self.start || x <= &self.end
        }
    }

    pub fn wraps(&self) -> bool {
        self.start > self.end
    }

    pub fn disjoint(&self, other: &BoundaryArc) -> bool {
        !self.contains(&other.start)
            && !self.contains(&other.end)
            && !other.contains(&self.start)
            && !other.contains(&self.end)
    }

    /// The closure of the complementary arc.
    pub fn complement(&self) -> BoundaryArc {
        BoundaryArc {
            start: self.end.clone(),
            end: self.start.clone(),
        }
    }

    /// A real Möbius map, increasing on the arc, that sends the arc to a
    /// bounded interval (identity when the arc avoids ∞).
    fn straighten(&self) -> [[BigRational; 2]; 2] {
        let one = BigRational::from_integer(1.into());
        let zero = BigRational::zero();
        if !self.wraps() {
            return [[one.clone(), zero.clone()], [zero, one]];
        }
        // x ↦ -1/(x - m), m in the complementary (bounded) gap
        let m = (&self.start + &self.end) / BigRational::from_integer(2.into());
        [[zero, -one.clone()], [one, -m]]
    }
}

/// The four arcs around the fixed points of `g` and `h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArcSet {
    pub g_plus: BoundaryArc,
    pub g_minus: BoundaryArc,
    pub h_plus: BoundaryArc,
    pub h_minus: BoundaryArc,
}

impl ArcSet {
    fn all(&self) -> [&BoundaryArc; 4] {
        [&self.g_plus, &self.g_minus, &self.h_plus, &self.h_minus]
    }

    pub fn pairwise_disjoint(&self) -> bool {
        let a = self.all();
        (0..4).all(|i| (i + 1..4).all(|j| a[i].disjoint(a[j])))
    }
}

#[derive(Clone, Debug)]
pub struct SchottkyCertificate {
    pub power: u32,
    pub embedding: usize,
    pub g_power: MoebiusElement,
    pub h_power: MoebiusElement,
    pub arcs: ArcSet,
}

impl SchottkyCertificate {
    /// Re-checks disjointness and the four ping-pong inclusions at `bits`.
    pub fn verify(&self, bits: u32) -> bool {
        self.arcs.pairwise_disjoint()
            && check_pingpong(
                &self.g_power,
                &self.h_power,
                self.embedding,
                &self.arcs,
                bits,
            )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "power": self.power,
            "embedding": self.embedding,
            "arcs": serde_json::to_value(&self.arcs).unwrap(),
            "g_power": self.g_power.to_json(),
            "h_power": self.h_power.to_json(),
        })
    }
}

fn apply_interval(m: &RealMatrix, x: &BigRational) -> Option<Interval> {
    let xi = Interval::point(x.clone());
    let num = &(&m[0][0] * &xi) + &m[0][1];
    let den = &(&m[1][0] * &xi) + &m[1][1];
    num.div(&den)
}

fn compose_rational(r: &[[BigRational; 2]; 2], m: &RealMatrix) -> RealMatrix {
    let p = |x: &BigRational| Interval::point(x.clone());
    let e = |i: usize, j: usize| &(&p(&r[i][0]) * &m[0][j]) + &(&p(&r[i][1]) * &m[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn apply_rational(r: &[[BigRational; 2]; 2], x: &BigRational) -> BigRational {
    (&r[0][0] * x + &r[0][1]) / (&r[1][0] * x + &r[1][1])
}

/// `g` maps the closure of the complement of `src` into `dst`.
fn maps_into(
    g: &MoebiusElement,
    i: usize,
    src: &BoundaryArc,
    dst: &BoundaryArc,
    bits: u32,
) -> bool {
    let Ok(m) = g.embed_matrix(i, bits) else {
        return false;
    };
    let j = src.complement();
    let r = dst.straighten();
    let rm = compose_rational(&r, &m);
    let (Some(p), Some(q)) = (apply_interval(&rm, &j.start), apply_interval(&rm, &j.end)) else {
        return false;
    };
    let lo = apply_rational(&r, &dst.start);
    let hi = apply_rational(&r, &dst.end);
    // orientation preserving: the image arc runs from image(start) to image(end)
    lo <= p.lo && p.hi < q.lo && q.hi <= hi
}

fn check_pingpong(
    g: &MoebiusElement,
    h: &MoebiusElement,
    i: usize,
    arcs: &ArcSet,
    bits: u32,
) -> bool {
    maps_into(g, i, &arcs.g_minus, &arcs.g_plus, bits)
        && maps_into(&g.inverse(), i, &arcs.g_plus, &arcs.g_minus, bits)
        && maps_into(h, i, &arcs.h_minus, &arcs.h_plus, bits)
        && maps_into(&h.inverse(), i, &arcs.h_plus, &arcs.h_minus, bits)
}

/// Binary quadratic `c x² + (d - a) x y - b y²` vanishing at the fixed points.
fn share_fixed_point(g: &MoebiusElement, h: &MoebiusElement) -> bool {
    let [a1, b1, c1, d1] = g.entries();
    let [a2, b2, c2, d2] = h.entries();
    let (p1, q1, r1) = (c1.clone(), d1 - a1, -b1);
    let (p2, q2, r2) = (c2.clone(), d2 - a2, -b2);
    let x = &(&p1 * &r2) - &(&p2 * &r1);
    let y = &(&p1 * &q2) - &(&p2 * &q1);
    let z = &(&q1 * &r2) - &(&q2 * &r1);
    (&x.square() - &(&y * &z)).is_zero()
}

fn chart_to_rational(theta: f64) -> BigRational {
    let t = theta.rem_euclid(1.0);
    // keep endpoints away from ∞ itself
    let t = if (t - 0.5).abs() < 1e-9 {
        0.5 + 1e-6
    } else {
        t
    };
    let x = (std::f64::consts::PI * t).tan();
    BigRational::from_float(x).expect("finite tangent")
}

fn arc_around(theta: f64, delta: f64) -> BoundaryArc {
    BoundaryArc {
        start: chart_to_rational(theta - delta),
        end: chart_to_rational(theta + delta),
    }
}

fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

fn attracting_repelling(g: &MoebiusElement, i: usize) -> Result<(f64, f64)> {
    match fixed_points(g, i, 64)? {
        FixedPoints::Hyperbolic {
            attracting,
            repelling,
        } => Ok((attracting.chart(), repelling.chart())),
        _ => Err(Error::NotHyperbolic),
    }
}

/// Searches `n = 1, 2, …, max_power` for a ping-pong certificate showing
/// that `gⁿ` and `hⁿ` generate a free group.
pub fn schottky_powers(
    g: &MoebiusElement,
    h: &MoebiusElement,
    i: usize,
    max_power: u32,
) -> Result<SchottkyCertificate> {
    for x in [g, h] {
        if classify(x, i, 1) != ElementClass::Hyperbolic {
            return Err(Error::NotHyperbolic);
        }
    }
    if share_fixed_point(g, h) {
        return Err(Error::CommonFixedPoint);
    }
    let (gp, gm) = attracting_repelling(g, i)?;
    let (hp, hm) = attracting_repelling(h, i)?;
    let pts = [gp, gm, hp, hm];
    let mut dmin = f64::INFINITY;
    for a in 0..4 {
        for b in a + 1..4 {
            dmin = dmin.min(circle_dist(pts[a], pts[b]));
        }
    }
    let mut gn = g.clone();
    let mut hn = h.clone();
    for n in 1..=max_power {
        if n > 1 {
            gn = gn.mul(g);
            hn = hn.mul(h);
        }
        for frac in [0.45, 0.3, 0.2, 0.1] {
            let delta = frac * dmin;
            let arcs = ArcSet {
                g_plus: arc_around(gp, delta),
                g_minus: arc_around(gm, delta),
                h_plus: arc_around(hp, delta),
                h_minus: arc_around(hm, delta),
            };
            if !arcs.pairwise_disjoint() {
                continue;
            }
            if check_pingpong(&gn, &hn, i, &arcs, 64) {
                return Ok(SchottkyCertificate {
                    power: n,
                    embedding: i,
                    g_power: gn,
                    h_power: hn,
                    arcs,
                });
            }
        }
    }
    Err(Error::SchottkyNotFound(max_power))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::{FieldElement, NumberField};

    #[test]
    fn strong_dynamics_certify_at_once() {
        let q = NumberField::rationals();
        // z ↦ 100z and a conjugate of it
        let ten = FieldElement::from_int(&q, 10);
        let g = MoebiusElement::new(
            ten.clone(),
            FieldElement::zero(&q),
            FieldElement::zero(&q),
            ten.inverse().unwrap(),
        )
        .unwrap();
        let s = MoebiusElement::from_ints(&q, [[2, 1], [1, 1]]).unwrap();
        let h = s.mul(&g).mul(&s.inverse());
        let cert = schottky_powers(&g, &h, 1, 5).unwrap();
        assert_eq!(cert.power, 1);
        assert!(cert.verify(128));
    }

    #[test]
    fn shared_fixed_point_detected() {
        let q = NumberField::rationals();
        let g = MoebiusElement::from_ints(&q, [[2, 1], [1, 1]]).unwrap();
        assert_eq!(
            schottky_powers(&g, &g.pow(2), 1, 5).unwrap_err(),
            Error::CommonFixedPoint
        );
        let t = MoebiusElement::from_ints(&q, [[1, 1], [0, 1]]).unwrap();
        assert_eq!(
            schottky_powers(&g, &t, 1, 5).unwrap_err(),
            Error::NotHyperbolic
        );
    }

    #[test]
    fn arcs_wrap_through_infinity() {
        let a = BoundaryArc {
            start: BigRational::from_integer(5.into()),
            end: BigRational::from_integer((-5).into()),
        };
        assert!(a.contains(&BigRational::from_integer(100.into())));
        assert!(!a.contains(&BigRational::from_integer(0.into())));
        let b = BoundaryArc {
            start: BigRational::from_integer((-1).into()),
            end: BigRational::from_integer(1.into()),
        };
        assert!(a.disjoint(&b));
    }
}
