//! Group specifications: Hecke groups, `(q, ∞, ∞)` triangle groups, the
//! modular group embedded diagonally, and user-supplied JSON.

mod enumerate;

pub use enumerate::{alphabet, enumerate, format_word, Enumerated, EnumerationRun, Letter};

use std::cmp::Ordering;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::moebius::{classify, square_trace, ElementClass, MoebiusElement};
use crate::numfield::{chebyshev_trace, FieldElement, NumberField};
use crate::poly::Poly;

/// Depth used to pick default embeddings for builtin groups.
pub const DETECT_DEPTH: usize = 10;
/// A conjugate trace set counts as unbounded once `|φ_i(tr)| > 2 + margin`.
pub const UNBOUNDED_MARGIN: i64 = 1;

#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub label: String,
    pub field: Arc<NumberField>,
    /// Named generators, in the order used for enumeration.
    pub generators: Vec<(String, MoebiusElement)>,
    /// Used embeddings; the first is the identity embedding.
    pub embeddings: Vec<usize>,
    /// True when all generators have rational entries, so every trace is
    /// fixed by every embedding.
    pub diagonal_by_construction: bool,
    pub provenance: String,
}

impl GroupSpec {
    pub fn r(&self) -> usize {
        self.embeddings.len()
    }

    pub fn generator(&self, name: &str) -> Option<&MoebiusElement> {
        self.generators
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| g)
    }

    /// Evaluates a word like `T^2*S` or `S*T^-4*S^-1`; `1` is the identity.
    pub fn eval_word(&self, word: &str) -> Result<MoebiusElement> {
        let mut g = MoebiusElement::identity(&self.field);
        let word = word.trim();
        if word == "1" {
            return Ok(g);
        }
        for tok in word.split('*') {
            let tok = tok.trim();
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (
                    n.trim(),
                    e.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::BadSpec(format!("bad exponent in '{tok}'")))?,
                ),
                None => (tok, 1),
            };
            let x = self
                .generator(name)
                .ok_or_else(|| Error::BadSpec(format!("unknown generator '{name}'")))?;
            g = g.mul(&x.pow(exp));
        }
        Ok(g)
    }

    fn check(&self) -> Result<()> {
        if self.generators.is_empty() {
            return Err(Error::BadSpec("no generators".into()));
        }
        if self.embeddings.is_empty() {
            return Err(Error::BadSpec("no embeddings".into()));
        }
        let n = self.field.degree();
        for (k, &i) in self.embeddings.iter().enumerate() {
            if i == 0 || i > n {
                return Err(Error::BadIndex {
                    index: i,
                    degree: n,
                });
            }
            if self.embeddings[..k].contains(&i) {
                return Err(Error::BadSpec(format!("embedding {i} listed twice")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut gens = Map::new();
        for (name, g) in &self.generators {
            gens.insert(name.clone(), g.to_json());
        }
        json!({
            "field": self.field.to_json(),
            "generators": gens,
            "embeddings": self.embeddings,
            "label": self.label,
        })
    }

    /// Parses `{"field": …, "generators": {"S": [[…]], …}, "embeddings": […], "label": …}`.
    /// Missing embeddings default to those with unbounded conjugate traces.
    pub fn from_json(v: &Value) -> Result<GroupSpec> {
        let field = NumberField::from_json(
            v.get("field")
                .ok_or_else(|| Error::BadSpec("missing \"field\"".into()))?,
        )?;
        let gens = v
            .get("generators")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::BadSpec("\"generators\" must be an object".into()))?;
        let generators = gens
            .iter()
            .map(|(name, m)| Ok((name.clone(), MoebiusElement::from_json(&field, m)?)))
            .collect::<Result<Vec<_>>>()?;
        let diagonal = generators
            .iter()
            .all(|(_, g)| g.entries().iter().all(|x| x.is_rational()));
        let label = v
            .get("label")
            .and_then(Value::as_str)
            .unwrap_or("user")
            .to_string();
        let mut spec = GroupSpec {
            label,
            field,
            generators,
            embeddings: vec![1],
            diagonal_by_construction: diagonal,
            provenance: "user spec (cofiniteness not verified)".into(),
        };
        match v.get("embeddings") {
            Some(Value::Array(a)) => {
                spec.embeddings = a
                    .iter()
                    .map(|x| {
                        x.as_u64().map(|u| u as usize).ok_or_else(|| {
                            Error::BadSpec("embeddings must be positive integers".into())
                        })
                    })
                    .collect::<Result<_>>()?;
            }
            None => spec.embeddings = default_embeddings(&spec),
            _ => return Err(Error::BadSpec("\"embeddings\" must be an array".into())),
        }
        spec.check()?;
        Ok(spec)
    }

    /// `hecke:q`, `tri-qinfinf:q` or `pslz-diag:<polynomial>`.
    pub fn builtin(name: &str) -> Result<GroupSpec> {
        let (kind, arg) = name
            .split_once(':')
            .ok_or_else(|| Error::BadSpec(format!("unknown group '{name}'")))?;
        let parse_q = || {
            arg.trim()
                .parse::<i64>()
                .map_err(|_| Error::BadSpec(format!("bad q in '{name}'")))
        };
        match kind {
            "hecke" => hecke_group(parse_q()?),
            "tri-qinfinf" => triangle_q_inf_inf(parse_q()?),
            "pslz-diag" => pslz_diagonal(&NumberField::parse(arg)?),
            _ => Err(Error::BadSpec(format!("unknown group family '{kind}'"))),
        }
    }
}

/// Minimal polynomial of `2cos(π/q)`.
///
/// The roots of `τ_q(t) + 2` are `2cos(kπ/q)` for odd `k`; those with
/// `gcd(k, q) = g > 1` belong to `2cos(π/(q/g))` and are divided out.
pub fn lambda_minpoly(q: i64) -> Result<Poly> {
    if q < 1 {
        return Err(Error::BadQ(q));
    }
    if q == 1 {
        return Ok(Poly::from_ints(&[2, 1]));
    }
    // τ_q as a polynomial in t
    let t = Poly::x();
    let mut prev = Poly::from_ints(&[2]);
    let mut cur = t.clone();
    for _ in 1..q {
        let next = t.mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
    }
    let mut p = cur.add(&Poly::from_ints(&[2])).squarefree_part();
    for g in (3..=q).step_by(2) {
        if q % g == 0 {
            let (quot, rem) = p.div_rem(&lambda_minpoly(q / g)?);
            debug_assert!(rem.is_zero());
            p = quot;
        }
    }
    let p = p.monic();
    let target = 2.0 * (std::f64::consts::PI / q as f64).cos();
    let roots = p.real_roots();
    let top = roots
        .last()
        .map(|r| r.to_interval())
        .ok_or(Error::BadQ(q))?;
    if !(top.lo_f64() - 1e-9 <= target && target <= top.hi_f64() + 1e-9) {
        return Err(Error::ConstructionInvalid(format!(
            "largest root of {p} is not 2cos(pi/{q})"
        )));
    }
    Ok(p)
}

/// `ℚ(2cos(π/q))`, with embedding 1 at `2cos(π/q)` itself.
pub fn lambda_field(q: i64) -> Result<(Arc<NumberField>, FieldElement)> {
    let field = NumberField::new(lambda_minpoly(q)?)?;
    let lambda = FieldElement::generator(&field);
    Ok((field, lambda))
}

fn matrix(m: [[&FieldElement; 2]; 2]) -> Result<MoebiusElement> {
    MoebiusElement::new(
        m[0][0].clone(),
        m[0][1].clone(),
        m[1][0].clone(),
        m[1][1].clone(),
    )
}

/// The Hecke group `H(q)`: `S = [[0,-1],[1,0]]`, `T = [[1,λ],[0,1]]`.
pub fn hecke_group(q: i64) -> Result<GroupSpec> {
    if q < 3 {
        return Err(Error::BadQ(q));
    }
    let (field, lambda) = lambda_field(q)?;
    let (zero, one) = (FieldElement::zero(&field), FieldElement::one(&field));
    let s = matrix([[&zero, &-&one], [&one, &zero]])?;
    let t = matrix([[&one, &lambda], [&zero, &one]])?;
    let (s2, st_q) = hecke_relations_of(&s, &t, q);
    if !s2 || !st_q {
        return Err(Error::ConstructionInvalid("Hecke relations fail".into()));
    }
    let mut spec = GroupSpec {
        label: format!("hecke-{q}"),
        field,
        generators: vec![("S".into(), s), ("T".into(), t)],
        embeddings: vec![1],
        diagonal_by_construction: false,
        provenance: format!("builtin Hecke group H({q}) = (2,{q},inf) triangle group"),
    };
    spec.embeddings = default_embeddings(&spec);
    Ok(spec)
}

fn hecke_relations_of(s: &MoebiusElement, t: &MoebiusElement, q: i64) -> (bool, bool) {
    (s.mul(s).is_identity(), s.mul(t).pow(q).is_identity())
}

/// `S² = ±I` and `(ST)^q = ±I`, checked exactly.
pub fn hecke_relations(spec: &GroupSpec, q: i64) -> Option<(bool, bool)> {
    Some(hecke_relations_of(
        spec.generator("S")?,
        spec.generator("T")?,
        q,
    ))
}

/// Triangle group of signature `(q, ∞, ∞)` generated by the elliptic
/// `E = [[2c, 1], [-1, 0]]` and parabolic `P = [[1, 2c + 2], [0, 1]]`,
/// `c = cos(π/q)`; `E·P` is parabolic.
pub fn triangle_q_inf_inf(q: i64) -> Result<GroupSpec> {
    if q < 2 {
        return Err(Error::BadQ(q));
    }
    let (field, lambda) = lambda_field(q)?;
    let (zero, one) = (FieldElement::zero(&field), FieldElement::one(&field));
    let two = FieldElement::from_int(&field, 2);
    let e = matrix([[&lambda, &one], [&-&one, &zero]])?;
    let p = matrix([[&one, &(&lambda + &two)], [&zero, &one]])?;
    let ep = e.mul(&p);
    if !ep.trace_sq().is_int(4) {
        return Err(Error::ConstructionInvalid(format!(
            "tr(EP) = {} is not +-2",
            ep.trace()
        )));
    }
    if classify(&e, 1, 2 * q as u32) != ElementClass::EllipticFinite(q as u32) {
        return Err(Error::ConstructionInvalid(format!(
            "E does not have order {q}"
        )));
    }
    let mut spec = GroupSpec {
        label: format!("tri-{q}-inf-inf"),
        field,
        generators: vec![("E".into(), e), ("P".into(), p)],
        embeddings: vec![1],
        diagonal_by_construction: false,
        provenance: format!("builtin ({q},inf,inf) triangle group"),
    };
    spec.embeddings = default_embeddings(&spec);
    Ok(spec)
}

/// `PSL(2,ℤ)` with its rational matrices read in a larger field, using every
/// embedding. All traces are rational, so the tuple group is not Zariski dense.
pub fn pslz_diagonal(field: &Arc<NumberField>) -> Result<GroupSpec> {
    let s = MoebiusElement::from_ints(field, [[0, -1], [1, 0]])?;
    let t = MoebiusElement::from_ints(field, [[1, 1], [0, 1]])?;
    Ok(GroupSpec {
        label: format!("pslz-diag:{}", field.minpoly().to_string().replace(' ', "")),
        field: field.clone(),
        generators: vec![("S".into(), s), ("T".into(), t)],
        embeddings: (1..=field.degree()).collect(),
        diagonal_by_construction: true,
        provenance: "PSL(2,Z) embedded diagonally".into(),
    })
}

/// Embedding 1 first, then the other embeddings whose sampled traces are unbounded.
fn default_embeddings(spec: &GroupSpec) -> Vec<usize> {
    let flags = detect_unbounded(spec, DETECT_DEPTH, 100_000);
    let mut out = vec![1];
    out.extend((2..=spec.field.degree()).filter(|&i| flags[i - 1]));
    out
}

/// For each embedding of the field (1-based order): whether some sampled
/// trace satisfies `|φ_i(tr)| > 2 + margin`, decided exactly.
pub fn detect_unbounded(spec: &GroupSpec, depth: usize, cap: usize) -> Vec<bool> {
    let n = spec.field.degree();
    if n == 1 {
        return vec![true];
    }
    let run = enumerate(spec, depth, cap);
    let bound = FieldElement::from_int(&spec.field, (2 + UNBOUNDED_MARGIN).pow(2));
    let mut flags = vec![false; n];
    for e in &run.elements {
        let d = &e.element.trace_sq() - &bound;
        for (i, f) in flags.iter_mut().enumerate() {
            if !*f && d.sign_at(i + 1) == Ordering::Greater {
                *f = true;
            }
        }
        if flags.iter().all(|&f| f) {
            break;
        }
    }
    flags
}

/// The distinct values `tr(g²) = tr(g)² - 2` over enumerated `g`, in order of
/// first appearance. A sample of the invariant trace field's generators,
/// not a field.
pub fn invariant_traces(spec: &GroupSpec, depth: usize, cap: usize) -> Vec<FieldElement> {
    let run = enumerate(spec, depth, cap);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for e in &run.elements {
        let t = square_trace(&e.element);
        if seen.insert(t.clone()) {
            out.push(t);
        }
    }
    out
}

/// `chebyshev_trace` check `tr(g²) = tr(g)² - 2` for one element.
pub fn square_trace_consistent(g: &MoebiusElement) -> bool {
    g.mul(g).trace_sq() == chebyshev_trace(2, &g.trace()).square()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_polys() {
        assert_eq!(lambda_minpoly(3).unwrap(), Poly::from_ints(&[-1, 1]));
        assert_eq!(lambda_minpoly(4).unwrap(), Poly::from_ints(&[-2, 0, 1]));
        assert_eq!(lambda_minpoly(5).unwrap(), Poly::from_ints(&[-1, -1, 1]));
        assert_eq!(lambda_minpoly(6).unwrap(), Poly::from_ints(&[-3, 0, 1]));
        assert_eq!(lambda_minpoly(7).unwrap(), Poly::from_ints(&[1, -2, -1, 1]));
        assert_eq!(lambda_minpoly(9).unwrap().degree(), Some(3));
        assert_eq!(lambda_minpoly(15).unwrap().degree(), Some(4));
        for q in 3..=16 {
            let n = (1..=2 * q)
                .filter(|k| num_integer::gcd(*k, 2 * q) == 1)
                .count()
                / 2;
            assert_eq!(lambda_minpoly(q).unwrap().degree(), Some(n), "q = {q}");
        }
    }

    #[test]
    fn hecke_builtins() {
        let h3 = hecke_group(3).unwrap();
        assert_eq!(h3.field.degree(), 1);
        assert_eq!(h3.embeddings, vec![1]);
        let h5 = hecke_group(5).unwrap();
        assert_eq!(h5.embeddings, vec![1, 2]);
        assert_eq!(hecke_relations(&h5, 5), Some((true, true)));
        assert_eq!(hecke_group(2).unwrap_err(), Error::BadQ(2));
        assert_eq!(
            hecke_group(4).unwrap().field.minpoly(),
            &Poly::from_ints(&[-2, 0, 1])
        );
    }

    #[test]
    fn triangle_builtins() {
        for q in 2..=7 {
            let g = triangle_q_inf_inf(q).unwrap();
            let e = g.generator("E").unwrap();
            assert!(e.pow(q).is_identity());
            assert_eq!(classify(e, 1, 50), ElementClass::EllipticFinite(q as u32));
            assert!(e.mul(g.generator("P").unwrap()).trace_sq().is_int(4));
        }
        assert_eq!(triangle_q_inf_inf(3).unwrap().field.degree(), 1);
        assert_eq!(triangle_q_inf_inf(1).unwrap_err(), Error::BadQ(1));
    }

    #[test]
    fn spec_json_roundtrip() {
        let h5 = hecke_group(5).unwrap();
        let v = h5.to_json();
        assert_eq!(v["label"], "hecke-5");
        let back = GroupSpec::from_json(&v).unwrap();
        assert_eq!(back.embeddings, vec![1, 2]);
        assert_eq!(back.generators.len(), 2);
        assert_eq!(back.generators[1].1, h5.generators[1].1);
        let bad = json!({"field": {"minpoly": ["-5", "0", "1"]}, "generators": {"A": [[["2"], ["0"]], [["0"], ["1"]]]}});
        assert_eq!(
            GroupSpec::from_json(&bad).unwrap_err(),
            Error::NotUnimodular
        );
    }

    #[test]
    fn builtin_names() {
        assert_eq!(GroupSpec::builtin("hecke:5").unwrap().label, "hecke-5");
        let d = GroupSpec::builtin("pslz-diag:x^2-5").unwrap();
        assert!(d.diagonal_by_construction);
        assert_eq!(d.embeddings, vec![1, 2]);
        assert!(GroupSpec::builtin("nope:3").is_err());
        assert!(GroupSpec::builtin("hecke").is_err());
    }

    #[test]
    fn enumeration_small_depths() {
        let h5 = hecke_group(5).unwrap();
        assert_eq!(enumerate(&h5, 0, 100).len(), 1);
        let run = enumerate(&h5, 1, 100);
        assert_eq!(run.level_counts, vec![1, 3]);
        let words: Vec<String> = run
            .elements
            .iter()
            .map(|e| run.word_string(&e.word))
            .collect();
        assert_eq!(words, vec!["1", "S", "T", "T^-1"]);
        let capped = enumerate(&h5, 6, 10);
        assert_eq!(capped.len(), 10);
        assert!(capped.truncated);
    }

    #[test]
    fn invariant_trace_samples() {
        let h5 = hecke_group(5).unwrap();
        let l = FieldElement::generator(&h5.field);
        let target = &l - &FieldElement::one(&h5.field);
        assert!(invariant_traces(&h5, 2, 1000).contains(&target));
        let h3 = hecke_group(3).unwrap();
        assert!(invariant_traces(&h3, 4, 1000)
            .iter()
            .all(FieldElement::is_rational));
        let id_only = invariant_traces(&h5, 0, 10);
        assert_eq!(id_only, vec![FieldElement::from_int(&h5.field, 2)]);
    }

    #[test]
    fn unbounded_detection() {
        let h5 = hecke_group(5).unwrap();
        assert_eq!(detect_unbounded(&h5, 8, 100_000), vec![true, true]);
        let d = GroupSpec::builtin("pslz-diag:x^2-5").unwrap();
        assert_eq!(detect_unbounded(&d, 6, 1000), vec![true, true]);
        let h3 = hecke_group(3).unwrap();
        assert_eq!(detect_unbounded(&h3, 2, 100), vec![true]);
    }
}
