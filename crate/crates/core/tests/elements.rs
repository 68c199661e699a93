use proptest::prelude::*;

use limitcone::groups::{hecke_group, GroupSpec};
use limitcone::interval::Interval;
use limitcone::moebius::{
    classify, fixed_points, translation_direction, translation_length, tuple_embed, BoundaryPoint,
    ElementClass, FixedPoints, MoebiusElement, TupleClass,
};
use limitcone::Error;

fn h5() -> GroupSpec {
    hecke_group(5).unwrap()
}

/// Product of generator letters: 0 = S, 1 = T, 2 = T⁻¹.
fn word(spec: &GroupSpec, letters: &[u8]) -> MoebiusElement {
    let s = spec.generator("S").unwrap();
    let t = spec.generator("T").unwrap();
    let ti = t.inverse();
    letters
        .iter()
        .fold(MoebiusElement::identity(&spec.field), |acc, &l| {
            acc.mul(match l {
                0 => s,
                1 => t,
                _ => &ti,
            })
        })
}

fn f64_mul(x: [[f64; 2]; 2], y: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
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

fn letters() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..3, 0..9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_laws(a in letters(), b in letters(), c in letters()) {
        let spec = h5();
        let (x, y, z) = (word(&spec, &a), word(&spec, &b), word(&spec, &c));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert!(x.mul(&x.inverse()).is_identity());
        prop_assert_eq!(x.pow(3), x.mul(&x).mul(&x));
        prop_assert_eq!(x.pow(-2), x.inverse().mul(&x.inverse()));
    }

    #[test]
    fn sign_is_projective(a in letters()) {
        // ±g are the same isometry: S² = -I in SL₂, which must canonicalise to the identity
        let spec = h5();
        let g = word(&spec, &a);
        let s = spec.generator("S").unwrap();
        let minus = s.mul(s);
        prop_assert!(minus.is_identity());
        prop_assert_eq!(g.mul(&minus), g.clone());
        prop_assert_eq!(g.mul(&minus).encode(), g.encode());
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let back = MoebiusElement::from_json(&spec.field, &serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn embedding_matches_float_product(a in letters()) {
        let spec = h5();
        let g = word(&spec, &a);
        for i in 1..=2 {
            let mut m = [[1.0, 0.0], [0.0, 1.0]];
            for &l in &a {
                m = f64_mul(m, word(&spec, &[l]).to_f64(i));
            }
            let exact = g.to_f64(i);
            // equal up to the projective sign
            let sign = if (m[0][0] + m[1][1]).abs() > 1e-9 {
                (m[0][0] + m[1][1]).signum() * (exact[0][0] + exact[1][1]).signum()
            } else if m[0][0].abs() + m[0][1].abs() > 1e-9 {
                let k = if m[0][0].abs() > m[0][1].abs() { (0, 0) } else { (0, 1) };
                m[k.0][k.1].signum() * exact[k.0][k.1].signum()
            } else {
                1.0
            };
            for r in 0..2 {
                for c in 0..2 {
                    prop_assert!((m[r][c] - sign * exact[r][c]).abs() < 1e-6 * (1.0 + m[r][c].abs()));
                }
            }
        }
    }

    #[test]
    fn classification_vs_trace(a in letters()) {
        let spec = h5();
        let g = word(&spec, &a);
        for i in 1..=2 {
            let t = g.trace().to_f64(i).abs();
            let c = classify(&g, i, 200);
            if g.is_identity() {
                prop_assert_eq!(c, ElementClass::Identity);
            } else if t > 2.0 + 1e-9 {
                prop_assert_eq!(c, ElementClass::Hyperbolic);
            } else if t < 2.0 - 1e-9 {
                prop_assert!(c.is_elliptic());
            }
            // the class of g at embedding i is shared with its inverse and conjugates
            prop_assert_eq!(classify(&g.inverse(), i, 200), c);
            let s = spec.generator("S").unwrap();
            prop_assert_eq!(classify(&s.mul(&g).mul(s), i, 200), c);
            if let ElementClass::EllipticFinite(k) = c {
                prop_assert!(g.pow(k as i64).is_identity());
                prop_assert!((1..k).all(|j| !g.pow(j as i64).is_identity()));
            }
        }
    }

    #[test]
    fn translation_length_vs_acosh(a in letters()) {
        let spec = h5();
        let g = word(&spec, &a);
        for i in 1..=2 {
            if classify(&g, i, 1) != ElementClass::Hyperbolic {
                prop_assert_eq!(translation_length(&g, i, 64).unwrap(), Interval::from_int(0));
                continue;
            }
            let l = translation_length(&g, i, 64).unwrap();
            let oracle = 2.0 * (g.trace().to_f64(i).abs() / 2.0).acosh();
            prop_assert!(l.narrower_than(64));
            prop_assert!((l.mid_f64() - oracle).abs() < 1e-9 * (1.0 + oracle));
            // ℓ(g²) = 2ℓ(g)
            let l2 = translation_length(&g.mul(&g), i, 64).unwrap();
            prop_assert!(l2.overlaps(&l.scale(&num_rational::BigRational::from_integer(2.into()))));
        }
    }

    #[test]
    fn attracting_point_is_fixed(a in letters()) {
        let spec = h5();
        let g = word(&spec, &a);
        for i in 1..=2 {
            if classify(&g, i, 1) != ElementClass::Hyperbolic {
                continue;
            }
            let FixedPoints::Hyperbolic { attracting, repelling } = fixed_points(&g, i, 64).unwrap() else {
                panic!("hyperbolic element without two fixed points");
            };
            let m = g.to_f64(i);
            let image = |p: &BoundaryPoint| match p {
                BoundaryPoint::Infinity => {
                    if m[1][0].abs() < 1e-12 { f64::INFINITY } else { m[0][0] / m[1][0] }
                }
                BoundaryPoint::Finite(x) => {
                    let x = x.mid_f64();
                    let den = m[1][0] * x + m[1][1];
                    if den.abs() < 1e-12 { f64::INFINITY } else { (m[0][0] * x + m[0][1]) / den }
                }
            };
            for p in [&attracting, &repelling] {
                let (x, y) = (p.to_f64(), image(p));
                prop_assert!(x == y || (x - y).abs() < 1e-6 * (1.0 + x.abs()), "{x} -> {y}");
            }
            // iterating from i·1 converges to the attracting point
            let mut z = num_complex::Complex64::new(0.3, 1.0);
            for _ in 0..60 {
                z = (z * m[0][0] + m[0][1]) / (z * m[1][0] + m[1][1]);
                if z.norm() > 1e12 {
                    break;
                }
            }
            let target = attracting.to_f64();
            if target.is_finite() && z.norm() < 1e12 {
                prop_assert!((z.re - target).abs() < 1e-3 * (1.0 + target.abs()));
            }
        }
    }

    #[test]
    fn directions_are_normalised(a in letters()) {
        let spec = h5();
        let g = word(&spec, &a);
        let t = tuple_embed(&g, &[1, 2], 64, 200).unwrap();
        match translation_direction(&t, 64) {
            Ok(d) => {
                let x = d.coords_f64();
                prop_assert!(x.iter().all(|&c| (0.0..=1.0).contains(&c)));
                prop_assert!(x.contains(&1.0));
                prop_assert!(d.first_dominates);
                prop_assert_eq!(x[0], 1.0);
            }
            Err(e) => {
                prop_assert_eq!(e, Error::NoTranslationDirection);
                prop_assert!(t.classes.iter().all(|c| *c != ElementClass::Hyperbolic));
            }
        }
    }
}

#[test]
fn t4s_length_and_ratio() {
    let spec = h5();
    let s = spec.generator("S").unwrap();
    let g = spec.generator("T").unwrap().pow(4).mul(s);
    let l = translation_length(&g, 1, 96).unwrap();
    let lambda = (1.0 + 5f64.sqrt()) / 2.0;
    // 2·arcosh(2λ) to 12 digits, from an independent high-precision evaluation
    assert!((l.mid_f64() - 3.685460_f64).abs() < 1e-6);
    assert!((l.mid_f64() - 2.0 * (2.0 * lambda).acosh()).abs() < 1e-12);
    let d = translation_direction(&tuple_embed(&g, &[1, 2], 96, 200).unwrap(), 96).unwrap();
    assert!((d.ratio(1).unwrap().mid_f64() - 0.3659).abs() < 5e-5);
}

#[test]
fn mixed_tuples() {
    let spec = h5();
    let g = spec.eval_word("T^2*S").unwrap();
    let t = tuple_embed(&g, &[1, 2], 64, 200).unwrap();
    assert_eq!(
        t.classes,
        [ElementClass::Hyperbolic, ElementClass::EllipticInfinite]
    );
    assert_eq!(t.tuple_class, TupleClass::Mixed);
    let u = tuple_embed(&spec.eval_word("S*T").unwrap(), &[1, 2], 64, 200).unwrap();
    assert_eq!(u.classes, [ElementClass::EllipticFinite(5); 2]);
    assert_eq!(u.tuple_class, TupleClass::Elliptic);
    let p = tuple_embed(spec.generator("T").unwrap(), &[1, 2], 64, 200).unwrap();
    assert_eq!(p.tuple_class, TupleClass::Parabolic);
}

#[test]
fn schottky_certificates() {
    use limitcone::moebius::schottky_powers;
    let spec = h5();
    let g = spec.eval_word("T^4*S").unwrap();
    let s = spec.generator("S").unwrap();
    let h = s.mul(&g).mul(&s.inverse());
    let cert = schottky_powers(&g, &h, 1, 20).unwrap();
    assert!(cert.power <= 20);
    assert!(cert.verify(128));
    assert!(cert.arcs.pairwise_disjoint());
    assert_eq!(cert.g_power, g.pow(cert.power as i64));
    // all reduced words of length ≤ 4 in the certified powers are nontrivial
    let gens = [
        cert.g_power.clone(),
        cert.g_power.inverse(),
        cert.h_power.clone(),
        cert.h_power.inverse(),
    ];
    let mut layer: Vec<(MoebiusElement, usize)> = (0..4).map(|k| (gens[k].clone(), k)).collect();
    for _ in 0..3 {
        assert!(layer.iter().all(|(w, _)| !w.is_identity()));
        let mut next = Vec::new();
        for (w, last) in &layer {
            for k in (0..4).filter(|k| *k != last ^ 1) {
                next.push((w.mul(&gens[k]), k));
            }
        }
        layer = next;
    }
    assert!(layer.iter().all(|(w, _)| !w.is_identity()));
    assert_eq!(
        schottky_powers(&g, &g.pow(2), 1, 5).unwrap_err(),
        Error::CommonFixedPoint
    );
    assert_eq!(
        schottky_powers(s, &g, 1, 5).unwrap_err(),
        Error::NotHyperbolic
    );
}
