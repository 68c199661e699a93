//! Zariski density of the embedded group in `PSL(2,ℝ)^r`, decided from
//! sampled invariant traces: the group is dense iff no used non-identity
//! embedding fixes every trace of a square.
//!
//! A witness is a proof of density. Absence of witnesses is only evidence,
//! except for specs whose generators are all rational.

use std::cmp::Ordering;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groups::{enumerate, GroupSpec};
use crate::moebius::square_trace;
use crate::numfield::FieldElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ZariskiVerdict {
    Dense,
    NotDense,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZariskiWitness {
    pub embedding: usize,
    /// Power-basis coordinates of `t = tr(g²)`.
    pub trace: Vec<String>,
    pub word: String,
    pub at_identity: f64,
    pub at_embedding: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZariskiReport {
    pub group: String,
    pub verdict: ZariskiVerdict,
    pub witnesses: Vec<ZariskiWitness>,
    /// Used embeddings that fixed every sampled trace.
    pub fixing: Vec<usize>,
    pub depth: usize,
    pub cap: usize,
    pub traces_sampled: usize,
    pub truncated: bool,
    /// True when the verdict does not depend on the sampling depth.
    pub certified: bool,
    pub note: String,
}

impl ZariskiReport {
    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).unwrap();
        v["schema"] = json!("1");
        v
    }
}

pub fn zariski_check(spec: &GroupSpec, depth: usize, cap: usize) -> Result<ZariskiReport> {
    if spec.r() < 2 {
        return Err(Error::DegreeOne);
    }
    let id = spec.embeddings[0];
    let others = &spec.embeddings[1..];
    let run = enumerate(spec, depth, cap);
    let mut seen = std::collections::HashSet::new();
    let mut found: Vec<Option<ZariskiWitness>> = vec![None; others.len()];
    for e in &run.elements {
        let t: FieldElement = square_trace(&e.element);
        if !seen.insert(t.clone()) {
            continue;
        }
        for (slot, &i) in found.iter_mut().zip(others) {
            if slot.is_none() && t.cmp_conjugates(id, i) != Ordering::Equal {
                *slot = Some(ZariskiWitness {
                    embedding: i,
                    trace: t.coord_strings(),
                    word: run.word_string(&e.word),
                    at_identity: t.to_f64(id),
                    at_embedding: t.to_f64(i),
                });
            }
        }
        if found.iter().all(Option::is_some) {
            break;
        }
    }
    let fixing: Vec<usize> = others
        .iter()
        .zip(&found)
        .filter(|(_, w)| w.is_none())
        .map(|(&i, _)| i)
        .collect();
    let witnesses: Vec<ZariskiWitness> = found.into_iter().flatten().collect();
    let (verdict, certified, note) = if fixing.is_empty() {
        (
            ZariskiVerdict::Dense,
            true,
            "every used embedding moves a sampled invariant trace".to_string(),
        )
    } else if spec.diagonal_by_construction {
        (
            ZariskiVerdict::NotDense,
            true,
            "generators are rational, so every trace is fixed".to_string(),
        )
    } else if run.truncated {
        (
            ZariskiVerdict::Inconclusive,
            false,
            "enumeration hit the cap before the requested depth".to_string(),
        )
    } else {
        (
            ZariskiVerdict::NotDense,
            false,
            format!("no witness up to word length {depth}; evidence, not proof"),
        )
    };
    Ok(ZariskiReport {
        group: spec.label.clone(),
        verdict,
        witnesses,
        fixing,
        depth,
        cap,
        traces_sampled: seen.len(),
        truncated: run.truncated,
        certified,
        note,
    })
}
