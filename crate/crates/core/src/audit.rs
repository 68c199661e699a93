//! Consistency audits over an enumeration: how the type of an element in one
//! embedding constrains its conjugates.

use std::cmp::Ordering;

use serde::Serialize;

use crate::groups::{enumerate, GroupSpec};
use crate::moebius::{classify, ElementClass};
use crate::par;

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub checked: usize,
    pub violations: Vec<String>,
    pub depth: usize,
    pub cap: usize,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The conjugate types allowed when the identity embedding has type `c`.
fn conjugate_allowed(c: ElementClass, other: ElementClass) -> bool {
    use ElementClass::*;
    match c {
        Identity => other == Identity,
        Parabolic => other == Parabolic,
        EllipticFinite(k) => other == EllipticFinite(k),
        Hyperbolic => matches!(other, Hyperbolic | EllipticInfinite),
        EllipticInfinite => matches!(other, Hyperbolic | EllipticInfinite),
    }
}

/// Checks, over every field embedding, that parabolic elements stay
/// parabolic, elliptic elements of order `k` stay of order `k`, and
/// hyperbolic elements become hyperbolic or elliptic of infinite order.
pub fn type_preservation(
    spec: &GroupSpec,
    depth: usize,
    cap: usize,
    order_bound: u32,
) -> AuditReport {
    let run = enumerate(spec, depth, cap);
    let n = spec.field.degree();
    let id = spec.embeddings[0];
    let bad = par::map(&run.elements, |e| {
        let c = classify(&e.element, id, order_bound);
        (1..=n).filter(|&i| i != id).find_map(|i| {
            let o = classify(&e.element, i, order_bound);
            (!conjugate_allowed(c, o)).then(|| {
                format!(
                    "{}: {} at {id} but {} at {i}",
                    run.word_string(&e.word),
                    c.label(),
                    o.label()
                )
            })
        })
    });
    AuditReport {
        checked: run.len(),
        violations: bad.into_iter().flatten().collect(),
        depth,
        cap,
    }
}

/// For elements hyperbolic in the identity embedding, checks
/// `|φ_i(tr g)| < |tr g|` exactly for every other field embedding.
pub fn trace_dominance(spec: &GroupSpec, depth: usize, cap: usize) -> AuditReport {
    let run = enumerate(spec, depth, cap);
    let n = spec.field.degree();
    let id = spec.embeddings[0];
    let found = par::map(&run.elements, |e| {
        if classify(&e.element, id, 1) != ElementClass::Hyperbolic {
            return None;
        }
        let t2 = e.element.trace_sq();
        let v = (1..=n)
            .filter(|&i| i != id)
            .find(|&i| t2.cmp_conjugates(i, id) != Ordering::Less);
        Some(v.map(|i| {
            format!(
                "{}: |tr| not smaller at embedding {i}",
                run.word_string(&e.word)
            )
        }))
    });
    let checked = found.iter().filter(|b| b.is_some()).count();
    AuditReport {
        checked,
        violations: found.into_iter().flatten().flatten().collect(),
        depth,
        cap,
    }
}
