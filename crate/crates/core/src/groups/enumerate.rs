//! Breadth-first enumeration of reduced words with projective deduplication.

use std::collections::HashSet;
use std::fmt::Write as _;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::GroupSpec;
use crate::moebius::MoebiusElement;

/// One generator or inverse generator.
#[derive(Clone, Debug)]
pub struct Letter {
    pub name: String,
    pub element: MoebiusElement,
    /// Index of the inverse letter (itself for involutions).
    pub inverse: usize,
    exponent: i32,
}

/// Letters in generator order, each generator followed by its inverse
/// (omitted when the generator is projectively an involution).
pub fn alphabet(spec: &GroupSpec) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for (name, g) in &spec.generators {
        let inv = g.inverse();
        let idx = out.len();
        if inv == *g {
            out.push(Letter {
                name: name.clone(),
                element: g.clone(),
                inverse: idx,
                exponent: 1,
            });
        } else {
            out.push(Letter {
                name: name.clone(),
                element: g.clone(),
                inverse: idx + 1,
                exponent: 1,
            });
            out.push(Letter {
                name: format!("{name}^-1"),
                element: inv,
                inverse: idx,
                exponent: -1,
            });
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct Enumerated {
    pub word: Vec<u16>,
    pub element: MoebiusElement,
}

#[derive(Clone, Debug)]
pub struct EnumerationRun {
    pub depth: usize,
    pub cap: usize,
    pub letters: Vec<Letter>,
    pub elements: Vec<Enumerated>,
    /// Number of new elements first reached at each word length.
    pub level_counts: Vec<usize>,
    pub truncated: bool,
}

impl EnumerationRun {
    pub fn word_string(&self, word: &[u16]) -> String {
        format_word(&self.letters, word)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// `T^2*S`-style rendering; the empty word is `1`.
pub fn format_word(letters: &[Letter], word: &[u16]) -> String {
    if word.is_empty() {
        return "1".into();
    }
    let mut out = String::new();
    let mut k = 0;
    while k < word.len() {
        let l = &letters[word[k] as usize];
        let mut run = 1;
        while k + run < word.len() && word[k + run] == word[k] {
            run += 1;
        }
        if !out.is_empty() {
            out.push('*');
        }
        let base = &l.name[..l.name.len() - if l.exponent < 0 { 3 } else { 0 }];
        let e = l.exponent * run as i32;
        if e == 1 {
            out.push_str(base);
        } else {
            write!(out, "{base}^{e}").unwrap();
        }
        k += run;
    }
    out
}

fn products(
    frontier: &[Enumerated],
    letters: &[Letter],
) -> Vec<Option<(Vec<u16>, MoebiusElement, Vec<u8>)>> {
    let step = |(f, l): (usize, usize)| {
        let src = &frontier[f];
        if let Some(&last) = src.word.last() {
            if letters[last as usize].inverse == l {
                return None;
            }
        }
        let e = src.element.mul(&letters[l].element);
        let key = e.encode();
        let mut w = src.word.clone();
        w.push(l as u16);
        Some((w, e, key))
    };
    let jobs: Vec<(usize, usize)> = (0..frontier.len())
        .flat_map(|f| (0..letters.len()).map(move |l| (f, l)))
        .collect();
    #[cfg(feature = "parallel")]
    {
        jobs.into_par_iter().map(step).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        jobs.into_iter().map(step).collect()
    }
}

/// All elements of word length at most `depth` (up to `cap` of them), each
/// with a shortest reduced word, in breadth-first order. The order depends
/// only on the spec, never on the number of worker threads.
pub fn enumerate(spec: &GroupSpec, depth: usize, cap: usize) -> EnumerationRun {
    let letters = alphabet(spec);
    let id = MoebiusElement::identity(&spec.field);
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    seen.insert(id.encode());
    let mut elements = vec![Enumerated {
        word: Vec::new(),
        element: id,
    }];
    let mut level_counts = vec![1];
    let mut truncated = false;
    let mut start = 0;
    for _ in 1..=depth {
        if truncated {
            break;
        }
        let end = elements.len();
        let found = products(&elements[start..end], &letters);
        let mut count = 0;
        for (w, e, key) in found.into_iter().flatten() {
            if seen.contains(&key) {
                continue;
            }
            if elements.len() >= cap {
                truncated = true;
                break;
            }
            seen.insert(key);
            elements.push(Enumerated {
                word: w,
                element: e,
            });
            count += 1;
        }
        level_counts.push(count);
        start = end;
        if count == 0 {
            break;
        }
    }
    EnumerationRun {
        depth,
        cap,
        letters,
        elements,
        level_counts,
        truncated,
    }
}
