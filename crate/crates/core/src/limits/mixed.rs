//! Search for an element whose factors have prescribed types, e.g.
//! hyperbolic in the first embedding and elliptic of infinite order in the
//! second.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{enumerate, GroupSpec};
use crate::moebius::{
    classify, product_type_predict, tuple_embed, ElementClass, IsometryTuple, MoebiusElement,
    ProductType,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SlotTarget {
    Hyp,
    EllInf,
}

impl SlotTarget {
    fn accepts(self, c: ElementClass) -> bool {
        match self {
            SlotTarget::Hyp => c == ElementClass::Hyperbolic,
            SlotTarget::EllInf => c == ElementClass::EllipticInfinite,
        }
    }

    fn allows(self, p: ProductType) -> bool {
        matches!(
            (self, p),
            (SlotTarget::Hyp, ProductType::Hyperbolic)
                | (SlotTarget::EllInf, ProductType::Elliptic)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Word length scanned directly, and the pool for products.
    pub depth: usize,
    pub cap: usize,
    /// Largest `m` tried in `g^m h`.
    pub max_power: u32,
    /// Number of `(g, h)` pairs tried.
    pub max_pairs: usize,
    pub order_bound: u32,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            depth: 6,
            cap: 10_000,
            max_power: 8,
            max_pairs: 2_000,
            order_bound: 200,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MixedWitness {
    pub word: String,
    pub tuple: IsometryTuple,
    /// `"scan"` for a direct hit in the enumeration, `"product"` otherwise.
    pub stage: &'static str,
}

fn matches(g: &MoebiusElement, spec: &GroupSpec, pattern: &[SlotTarget], order_bound: u32) -> bool {
    spec.embeddings
        .iter()
        .zip(pattern)
        .all(|(&i, t)| t.accepts(classify(g, i, order_bound)))
}

pub fn find_mixed_witness(
    spec: &GroupSpec,
    pattern: &[SlotTarget],
    budget: SearchBudget,
) -> Result<MixedWitness> {
    if pattern.len() != spec.r() {
        return Err(Error::BadSpec(format!(
            "pattern has {} slots, spec has r = {}",
            pattern.len(),
            spec.r()
        )));
    }
    let ob = budget.order_bound;
    let run = enumerate(spec, budget.depth, budget.cap);
    let witness = |g: &MoebiusElement, word: String, stage| -> Result<MixedWitness> {
        Ok(MixedWitness {
            word,
            tuple: tuple_embed(g, &spec.embeddings, 64, ob)?,
            stage,
        })
    };
    for e in &run.elements {
        if matches(&e.element, spec, pattern, ob) {
            return witness(&e.element, run.word_string(&e.word), "scan");
        }
    }
    // g^m h with g elliptic somewhere and h hyperbolic everywhere
    let emb = &spec.embeddings;
    let classes = |g: &MoebiusElement| emb.iter().map(|&i| classify(g, i, 1)).collect::<Vec<_>>();
    let hyps: Vec<usize> = (0..run.len())
        .filter(|&k| {
            classes(&run.elements[k].element)
                .iter()
                .all(|c| *c == ElementClass::Hyperbolic)
        })
        .collect();
    let ells: Vec<usize> = (0..run.len())
        .filter(|&k| {
            classes(&run.elements[k].element)
                .iter()
                .any(|c| c.is_elliptic())
        })
        .collect();
    let mut pairs = 0;
    for &ge in &ells {
        for &he in &hyps {
            if pairs >= budget.max_pairs {
                return Err(Error::WitnessNotFound(format!(
                    "{} pairs, depth {}, powers up to {}",
                    budget.max_pairs, budget.depth, budget.max_power
                )));
            }
            pairs += 1;
            let h = &run.elements[he].element;
            let g = &run.elements[ge].element;
            let mut gm = g.clone();
            for m in 1..=budget.max_power {
                if m > 1 {
                    gm = gm.mul(g);
                }
                let ruled_out = emb.iter().zip(pattern).any(|(&i, t)| {
                    classify(&gm, i, 1).is_elliptic()
                        && matches!(product_type_predict(&gm, h, i), Ok(p) if !t.allows(p))
                });
                if ruled_out {
                    continue;
                }
                let cand = gm.mul(h);
                if matches(&cand, spec, pattern, ob) {
                    let word = format!(
                        "({})^{m}*({})",
                        run.word_string(&run.elements[ge].word),
                        run.word_string(&run.elements[he].word)
                    );
                    return witness(&cand, word, "product");
                }
            }
        }
    }
    Err(Error::WitnessNotFound(format!(
        "{pairs} pairs, depth {}, powers up to {}",
        budget.depth, budget.max_power
    )))
}
