//! Decomposition of hyperbolic and elliptic isometries into reflections in
//! geodesics, and the type prediction for products that follows from it.
//!
//! Everything here runs in floating point after embedding; the exact
//! classification in the parent module is the reference.

use num_complex::Complex64;
use serde::Serialize;

use super::{classify, ElementClass, FixedPoints, MoebiusElement};
use crate::error::{Error, Result};

pub type Complex = Complex64;

/// A geodesic of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum ReflectionLine {
    Vertical { x: f64 },
    Circle { center: f64, radius: f64 },
}

impl ReflectionLine {
    fn through(p: f64, q: f64) -> ReflectionLine {
        if p.is_infinite() {
            ReflectionLine::Vertical { x: q }
        } else if q.is_infinite() {
            ReflectionLine::Vertical { x: p }
        } else {
            ReflectionLine::Circle {
                center: (p + q) / 2.0,
                radius: (p - q).abs() / 2.0,
            }
        }
    }

    /// Matrix `A` (determinant -1) with reflection `z ↦ (a z̄ + b)/(c z̄ + d)`.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        match *self {
            ReflectionLine::Vertical { x } => [[-1.0, 2.0 * x], [0.0, 1.0]],
            ReflectionLine::Circle {
                center: p,
                radius: r,
            } => [[p / r, (r * r - p * p) / r], [1.0 / r, -p / r]],
        }
    }

    pub fn reflect(&self, z: Complex) -> Complex {
        let m = self.matrix();
        let w = z.conj();
        (w * m[0][0] + m[0][1]) / (w * m[1][0] + m[1][1])
    }
}

fn mat_mul(x: [[f64; 2]; 2], y: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [
        [
            x[0][0] * y[0][0] + x[0][1] * y[1][0],
            x[0][0] * y[0][1] + x[0][1] * y[1][1],
        ],
        [
            x[1][0] * y[0][0] + x[1][1] * y[1][0],
            x[1][0] * y[0][1] + x[1][1] * y[1][1],
        ],
    ]
}

fn mat_inv(x: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [[x[1][1], -x[0][1]], [-x[1][0], x[0][0]]]
}

fn apply(m: [[f64; 2]; 2], z: Complex) -> Complex {
    (z * m[0][0] + m[0][1]) / (z * m[1][0] + m[1][1])
}

fn apply_boundary(m: [[f64; 2]; 2], x: f64) -> f64 {
    if x.is_infinite() {
        return if m[1][0] == 0.0 {
            f64::INFINITY
        } else {
            m[0][0] / m[1][0]
        };
    }
    let den = m[1][0] * x + m[1][1];
    if den == 0.0 {
        f64::INFINITY
    } else {
        (m[0][0] * x + m[0][1]) / den
    }
}

/// Largest difference between `x` and `±y`.
pub fn projective_residual(x: [[f64; 2]; 2], y: [[f64; 2]; 2]) -> f64 {
    let mut plus = 0.0f64;
    let mut minus = 0.0f64;
    for r in 0..2 {
        for c in 0..2 {
            plus = plus.max((x[r][c] - y[r][c]).abs());
            minus = minus.max((x[r][c] + y[r][c]).abs());
        }
    }
    plus.min(minus)
}

/// Conjugating frame of a hyperbolic element: a real determinant-one `M`
/// sending the repelling point to 0 and the attracting one to ∞, together
/// with the multiplier `k > 1` of `M h M⁻¹ : w ↦ k w`.
struct AxisFrame {
    m: [[f64; 2]; 2],
    k: f64,
}

fn axis_frame(h: &MoebiusElement, i: usize) -> Result<AxisFrame> {
    let FixedPoints::Hyperbolic {
        attracting,
        repelling,
    } = super::fixed_points(h, i, 60)?
    else {
        return Err(Error::NotHyperbolic);
    };
    let (v, u) = (attracting.to_f64(), repelling.to_f64());
    let m = if v.is_infinite() {
        [[1.0, -u], [0.0, 1.0]]
    } else if u.is_infinite() {
        [[0.0, -1.0], [1.0, -v]]
    } else {
        let (raw, det) = if u > v {
            ([[1.0, -u], [1.0, -v]], u - v)
        } else {
            ([[-1.0, u], [1.0, -v]], v - u)
        };
        let s = det.sqrt();
        [
            [raw[0][0] / s, raw[0][1] / s],
            [raw[1][0] / s, raw[1][1] / s],
        ]
    };
    let t = {
        let f = h.to_f64(i);
        (f[0][0] + f[1][1]).abs()
    };
    let mult = (t + (t * t - 4.0).max(0.0).sqrt()) / 2.0;
    Ok(AxisFrame { m, k: mult * mult })
}

/// Two geodesics orthogonal to the axis of `h` (at embedding `i`) whose
/// reflections compose to `h`: `h = σ₂ ∘ σ₁`, with `L₁` through `anchor`.
pub fn axis_reflections(
    h: &MoebiusElement,
    i: usize,
    anchor: Complex,
) -> Result<(ReflectionLine, ReflectionLine)> {
    if classify(h, i, 1) != ElementClass::Hyperbolic {
        return Err(Error::NotHyperbolic);
    }
    let frame = axis_frame(h, i)?;
    let w0 = apply(frame.m, anchor);
    let r1 = w0.norm();
    let r2 = r1 * frame.k.sqrt();
    let back = mat_inv(frame.m);
    let line = |r: f64| ReflectionLine::through(apply_boundary(back, -r), apply_boundary(back, r));
    Ok((line(r1), line(r2)))
}

/// Real matrix of `σ₂ ∘ σ₁`.
pub fn compose_reflections(l1: &ReflectionLine, l2: &ReflectionLine) -> [[f64; 2]; 2] {
    mat_mul(l2.matrix(), l1.matrix())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProductType {
    Hyperbolic,
    Elliptic,
    Parabolic,
}

impl ProductType {
    pub fn matches(self, c: ElementClass) -> bool {
        match self {
            ProductType::Hyperbolic => c == ElementClass::Hyperbolic,
            ProductType::Parabolic => c == ElementClass::Parabolic,
            ProductType::Elliptic => c.is_elliptic(),
        }
    }
}

/// Relative tolerance inside which a tangency of `L₁` and `L₄` is reported.
const TANGENCY_TOL: f64 = 1e-10;
/// Band around tangency in which floating point cannot decide.
const UNDECIDED_TOL: f64 = 1e-7;

/// Predicts the type of `e·h` at embedding `i` from the relative position of
/// two geodesics.
///
/// With `L₂ = L₃` the geodesic through the fixed point of `e` orthogonal to
/// the axis of `h`, we have `h = σ₂σ₁`, `e = σ₄σ₃` and so `e·h = σ₄σ₁`:
/// hyperbolic if `L₁`, `L₄` are disjoint, parabolic if they meet at the
/// boundary, elliptic if they cross.
pub fn product_type_predict(
    e: &MoebiusElement,
    h: &MoebiusElement,
    i: usize,
) -> Result<ProductType> {
    if classify(h, i, 1) != ElementClass::Hyperbolic {
        return Err(Error::NotHyperbolic);
    }
    if !classify(e, i, 1).is_elliptic() {
        return Err(Error::NotElliptic);
    }
    let frame = axis_frame(h, i)?;
    let ef = mat_mul(mat_mul(frame.m, e.to_f64(i)), mat_inv(frame.m));
    let (a, b, c, d) = (ef[0][0], ef[0][1], ef[1][0], ef[1][1]);
    let tr = a + d;
    let w0 = Complex::new(
        (a - d) / (2.0 * c),
        (4.0 - tr * tr).max(0.0).sqrt() / (2.0 * c.abs()),
    );
    if w0.im.is_nan() || w0.im <= 0.0 || !w0.re.is_finite() {
        return Err(Error::GeometryDegenerate);
    }
    // e rotates by ψ about w0; σ₄σ₃ = rotation by twice the angle L₃ → L₄.
    let psi = -2.0 * (w0 * c + d).arg();
    let tangent3 = Complex::i() * w0 / w0.norm();
    let t4 = tangent3 * Complex::from_polar(1.0, psi / 2.0);
    let rho1 = w0.norm() / frame.k.sqrt();
    // |I| < 1: crossing; |I| = 1: tangent; |I| > 1: disjoint.
    let scale = 1.0 + b.abs().max(c.abs()).max(a.abs()) * frame.k.sqrt();
    let inv = if t4.re.abs() <= 1e-300 {
        w0.re / rho1
    } else {
        let c4 = w0.re + w0.im * t4.im / t4.re;
        let r4 = (w0 - c4).norm();
        (rho1 * rho1 + r4 * r4 - c4 * c4) / (2.0 * rho1 * r4)
    };
    let gap = inv.abs() - 1.0;
    if gap.abs() <= TANGENCY_TOL * scale {
        Ok(ProductType::Parabolic)
    } else if gap.abs() <= UNDECIDED_TOL * scale || !gap.is_finite() {
        Err(Error::GeometryDegenerate)
    } else if gap < 0.0 {
        Ok(ProductType::Elliptic)
    } else {
        Ok(ProductType::Hyperbolic)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::{FieldElement, NumberField};

    #[test]
    fn diagonal_example() {
        let q = NumberField::rationals();
        let two = FieldElement::from_int(&q, 2);
        let h = MoebiusElement::new(
            two.clone(),
            FieldElement::zero(&q),
            FieldElement::zero(&q),
            two.inverse().unwrap(),
        )
        .unwrap();
        let (l1, l2) = axis_reflections(&h, 1, Complex::i()).unwrap();
        match (l1, l2) {
            (
                ReflectionLine::Circle {
                    center: c1,
                    radius: r1,
                },
                ReflectionLine::Circle {
                    center: c2,
                    radius: r2,
                },
            ) => {
                assert!(c1.abs() < 1e-12 && (r1 - 1.0).abs() < 1e-12);
                assert!(c2.abs() < 1e-12 && (r2 - 2.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        let m = compose_reflections(&l1, &l2);
        assert!(projective_residual(m, h.to_f64(1)) < 1e-12);
    }

    #[test]
    fn anchor_moves_lines_not_product() {
        let k = NumberField::parse("x^2 - x - 1").unwrap();
        let l = FieldElement::generator(&k);
        let h = MoebiusElement::new(
            &FieldElement::from_int(&k, 4) * &l,
            FieldElement::from_int(&k, -1),
            FieldElement::one(&k),
            FieldElement::zero(&k),
        )
        .unwrap();
        let FixedPoints::Hyperbolic {
            attracting,
            repelling,
        } = super::super::fixed_points(&h, 1, 50).unwrap()
        else {
            panic!()
        };
        let (p, q) = (attracting.to_f64(), repelling.to_f64());
        let c = (p + q) / 2.0;
        let r = (p - q).abs() / 2.0;
        let mut prev = None;
        for ang in [0.5f64, 1.0, 2.0] {
            let anchor = Complex::new(c + r * ang.cos(), r * ang.sin());
            let (l1, l2) = axis_reflections(&h, 1, anchor).unwrap();
            assert!(projective_residual(compose_reflections(&l1, &l2), h.to_f64(1)) < 1e-9);
            // L1 passes through the anchor: reflection fixes it
            assert!((l1.reflect(anchor) - anchor).norm() < 1e-9);
            assert_ne!(prev, Some(l1));
            prev = Some(l1);
        }
    }

    #[test]
    fn prediction_for_hecke_pair() {
        let k = NumberField::parse("x^2 - x - 1").unwrap();
        let l = FieldElement::generator(&k);
        let ts = |n: i64| {
            MoebiusElement::new(
                &FieldElement::from_int(&k, n) * &l,
                FieldElement::from_int(&k, -1),
                FieldElement::one(&k),
                FieldElement::zero(&k),
            )
            .unwrap()
        };
        let (e, h) = (ts(2), ts(4));
        let p = product_type_predict(&e, &h, 2).unwrap();
        assert!(p.matches(classify(&e.mul(&h), 2, 200)));
    }

    #[test]
    fn small_rotation_far_from_axis_is_hyperbolic() {
        use num_rational::BigRational;
        let q = NumberField::rationals();
        let fe =
            |n: i64, d: i64| FieldElement::from_rational(&q, &BigRational::new(n.into(), d.into()));
        let three = fe(3, 1);
        let h = MoebiusElement::new(three.clone(), fe(0, 1), fe(0, 1), three.inverse().unwrap())
            .unwrap();
        // rotation about i by a small angle, moved to 100 + i
        let rot = MoebiusElement::new(
            fe(2499, 2501),
            fe(100, 2501),
            fe(-100, 2501),
            fe(2499, 2501),
        )
        .unwrap();
        let shift = MoebiusElement::from_ints(&q, [[1, 100], [0, 1]]).unwrap();
        let e = shift.mul(&rot).mul(&shift.inverse());
        assert!(classify(&e, 1, 1).is_elliptic());
        assert_eq!(
            product_type_predict(&e, &h, 1).unwrap(),
            ProductType::Hyperbolic
        );
        assert_eq!(classify(&e.mul(&h), 1, 1), ElementClass::Hyperbolic);
    }
}
