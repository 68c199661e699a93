use std::collections::HashMap;

use proptest::prelude::*;

use limitcone::groups::{
    alphabet, enumerate, hecke_group, hecke_relations, lambda_minpoly, triangle_q_inf_inf,
    GroupSpec,
};
use limitcone::moebius::{classify, ElementClass, MoebiusElement};
use limitcone::poly::Poly;
use limitcone::Error;

/// Every word of length ≤ depth over the alphabet (no reduction, no pruning),
/// keyed by element, with the shortest length seen.
fn naive_ball(spec: &GroupSpec, depth: usize) -> HashMap<Vec<u8>, usize> {
    let letters = alphabet(spec);
    let mut best: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut layer = vec![MoebiusElement::identity(&spec.field)];
    best.insert(layer[0].encode(), 0);
    for len in 1..=depth {
        let mut next = Vec::new();
        for g in &layer {
            for l in &letters {
                let h = g.mul(&l.element);
                best.entry(h.encode()).or_insert(len);
                next.push(h);
            }
        }
        layer = next;
    }
    best
}

#[test]
fn enumeration_matches_naive_ball() {
    for spec in [
        hecke_group(5).unwrap(),
        triangle_q_inf_inf(5).unwrap(),
        hecke_group(3).unwrap(),
    ] {
        let depth = 6;
        let run = enumerate(&spec, depth, 1_000_000);
        let naive = naive_ball(&spec, depth);
        assert_eq!(run.len(), naive.len(), "{}", spec.label);
        for e in &run.elements {
            assert_eq!(
                naive.get(&e.element.encode()),
                Some(&e.word.len()),
                "{}",
                run.word_string(&e.word)
            );
        }
        let mut levels = vec![0; depth + 1];
        for &l in naive.values() {
            levels[l] += 1;
        }
        assert_eq!(run.level_counts, levels);
    }
}

#[test]
fn words_evaluate_to_their_elements() {
    let spec = hecke_group(5).unwrap();
    let run = enumerate(&spec, 7, 100_000);
    for e in &run.elements {
        assert_eq!(
            spec.eval_word(&run.word_string(&e.word)).unwrap(),
            e.element
        );
    }
}

#[test]
fn enumeration_is_deterministic_and_capped() {
    let spec = hecke_group(5).unwrap();
    let a = enumerate(&spec, 8, 100_000);
    let b = enumerate(&spec, 8, 100_000);
    assert_eq!(a.elements.len(), b.elements.len());
    assert!(a
        .elements
        .iter()
        .zip(&b.elements)
        .all(|(x, y)| x.word == y.word && x.element == y.element));
    let c = enumerate(&spec, 8, 100);
    assert!(c.truncated && c.len() == 100);
    assert!(c
        .elements
        .iter()
        .zip(&a.elements)
        .all(|(x, y)| x.word == y.word));
    let z = enumerate(&spec, 0, 10);
    assert_eq!(z.len(), 1);
    assert!(z.elements[0].element.is_identity());
}

#[test]
fn builtin_names() {
    assert_eq!(GroupSpec::builtin("hecke:5").unwrap().r(), 2);
    assert_eq!(GroupSpec::builtin("tri-qinfinf:7").unwrap().r(), 3);
    assert_eq!(GroupSpec::builtin("pslz-diag:x^2-5").unwrap().r(), 2);
    assert!(matches!(
        GroupSpec::builtin("hecke"),
        Err(Error::BadSpec(_))
    ));
    assert!(matches!(
        GroupSpec::builtin("free:2"),
        Err(Error::BadSpec(_))
    ));
    assert!(matches!(GroupSpec::builtin("hecke:2"), Err(Error::BadQ(2))));
}

#[test]
fn spec_json_round_trip() {
    let spec = hecke_group(7).unwrap();
    let back = GroupSpec::from_json(&spec.to_json()).unwrap();
    assert_eq!(back.embeddings, spec.embeddings);
    assert_eq!(back.generators.len(), spec.generators.len());
    for ((n1, g1), (n2, g2)) in spec.generators.iter().zip(&back.generators) {
        assert_eq!((n1, g1), (n2, g2));
    }
    let bad = serde_json::json!({ "field": { "minpoly": ["-5", "0", "1"] }, "generators": { "A": [[["2"], ["0"]], [["0"], ["1"]]] } });
    assert!(GroupSpec::from_json(&bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn hecke_relations_hold(q in 3i64..13) {
        let spec = hecke_group(q).unwrap();
        prop_assert_eq!(hecke_relations(&spec, q), Some((true, true)));
        // S·T has order exactly q in every embedding
        let st = spec.eval_word("S*T").unwrap();
        for i in 1..=spec.field.degree() {
            prop_assert_eq!(classify(&st, i, 200), ElementClass::EllipticFinite(q as u32));
        }
        // the degree of λ_q is φ(2q)/2
        let deg = (1..2 * q).filter(|k| num_integer::gcd(*k, 2 * q) == 1).count() / 2;
        prop_assert_eq!(spec.field.degree(), deg);
    }

    #[test]
    fn lambda_is_a_root(q in 3i64..16) {
        let p: Poly = lambda_minpoly(q).unwrap();
        let lambda = 2.0 * (std::f64::consts::PI / q as f64).cos();
        let v = p.coeffs().iter().rev().fold(0.0, |acc, c| {
            acc * lambda + num_traits::ToPrimitive::to_f64(c).unwrap()
        });
        prop_assert!(v.abs() < 1e-9);
    }
}
