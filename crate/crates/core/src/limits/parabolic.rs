//! Elements with traces `tr(T_n) = nA - B`, where `A = tr_u + tr_v` and
//! `B = tr_u`. Their directions tend to `(1 : … : 1)`.

use std::cmp::Ordering;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::moebius::{length_from_trace, Direction};
use crate::numfield::FieldElement;

#[derive(Clone, Debug)]
pub struct ParabolicRow {
    pub n: u64,
    pub trace: FieldElement,
    /// `ℓ_k(n)` per used embedding; `None` while `|φ_k(tr)| ≤ 2`.
    pub lengths: Vec<Option<Interval>>,
    /// Embeddings (1-based) still elliptic or parabolic at this `n`.
    pub still_elliptic: Vec<usize>,
    pub direction: Option<Direction>,
    /// `ℓ_1 - ℓ_k` for `k ≥ 2`, when both are defined.
    pub differences: Vec<Option<Interval>>,
}

impl ParabolicRow {
    pub fn ratio(&self) -> Option<Interval> {
        self.direction.as_ref().and_then(|d| d.ratio(1))
    }
}

#[derive(Clone, Debug)]
pub struct ParabolicReport {
    pub a: FieldElement,
    pub b: FieldElement,
    pub embeddings: Vec<usize>,
    /// `2 ln(|φ_1(A)| / |φ_k(A)|)` for `k ≥ 2`.
    pub limits: Vec<Interval>,
    pub rows: Vec<ParabolicRow>,
    pub bits: u32,
}

impl ParabolicReport {
    /// Columns: `n,len_1..len_r,diff_2..diff_r,limit_2..limit_r,error_2..error_r,still_elliptic`.
    pub fn to_csv(&self) -> String {
        let r = self.embeddings.len();
        let mut out = String::from("n");
        for k in 1..=r {
            out.push_str(&format!(",len_{k}"));
        }
        for prefix in ["diff", "limit", "error"] {
            for k in 2..=r {
                out.push_str(&format!(",{prefix}_{k}"));
            }
        }
        out.push_str(",still_elliptic\n");
        let f = |x: &Option<Interval>| {
            x.as_ref()
                .map_or(String::new(), |v| format!("{:.15}", v.mid_f64()))
        };
        for row in &self.rows {
            out.push_str(&row.n.to_string());
            for l in &row.lengths {
                out.push_str(&format!(",{}", f(l)));
            }
            for d in &row.differences {
                out.push_str(&format!(",{}", f(d)));
            }
            for l in &self.limits {
                out.push_str(&format!(",{:.15}", l.mid_f64()));
            }
            for (d, l) in row.differences.iter().zip(&self.limits) {
                out.push_str(&format!(",{}", f(&d.as_ref().map(|d| d - l))));
            }
            let skipped: Vec<String> = row.still_elliptic.iter().map(usize::to_string).collect();
            out.push_str(&format!(",{}\n", skipped.join(" ")));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": "1",
            "A": self.a.coord_strings(),
            "B": self.b.coord_strings(),
            "embeddings": self.embeddings,
            "bits": self.bits,
            "limits": self.limits.iter().map(Interval::mid_f64).collect::<Vec<_>>(),
            "rows": self.rows.iter().map(|r| json!({
                "n": r.n,
                "trace": r.trace.coord_strings(),
                "lengths": r.lengths.iter().map(|l| l.as_ref().map(Interval::mid_f64)).collect::<Vec<_>>(),
                "differences": r.differences.iter().map(|l| l.as_ref().map(Interval::mid_f64)).collect::<Vec<_>>(),
                "ratio": r.ratio().map(|x| x.mid_f64()),
                "still_elliptic": r.still_elliptic,
            })).collect::<Vec<_>>(),
        })
    }
}

fn hyperbolic_at(t: &FieldElement, i: usize) -> bool {
    (&t.square() - &FieldElement::from_int(t.field(), 4)).sign_at(i) == Ordering::Greater
}

pub fn parabolic_family(
    tr_u: &FieldElement,
    tr_v: &FieldElement,
    n_list: &[u64],
    embeddings: &[usize],
    bits: u32,
) -> Result<ParabolicReport> {
    let field = tr_u.field();
    let deg = field.degree();
    if let Some(&bad) = embeddings.iter().find(|&&i| i == 0 || i > deg) {
        return Err(Error::BadIndex {
            index: bad,
            degree: deg,
        });
    }
    let Some(&id) = embeddings.first() else {
        return Err(Error::BadSpec("no embeddings".into()));
    };
    if !hyperbolic_at(tr_u, id) || !hyperbolic_at(tr_v, id) {
        return Err(Error::NotHyperbolic);
    }
    let a = tr_u.checked_add(tr_v)?;
    if a.is_zero() {
        return Err(Error::BadSpec("tr_u + tr_v = 0".into()));
    }
    let b = tr_u.clone();
    let two = Interval::from_int(2);
    let limits = embeddings[1..]
        .iter()
        .map(|&k| {
            let q = a
                .embed(id, bits + 16)?
                .abs()
                .div(&a.embed(k, bits + 16)?.abs())
                .ok_or(Error::DivisionByZero)?;
            Ok(&q.ln(bits + 16) * &two)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let trace = &(&FieldElement::from_rational(
            field,
            &num_rational::BigRational::from_integer(n.into()),
        ) * &a)
            - &b;
        let mut lengths = Vec::with_capacity(embeddings.len());
        let mut still_elliptic = Vec::new();
        for &i in embeddings {
            if hyperbolic_at(&trace, i) {
                lengths.push(Some(length_from_trace(&trace, i, bits)?));
            } else {
                lengths.push(None);
                still_elliptic.push(i);
            }
        }
        let direction = if still_elliptic.is_empty() {
            Some(Direction::from_lengths(
                lengths.iter().flatten().cloned().collect(),
                Some(format!("T_{n}")),
            )?)
        } else {
            None
        };
        let differences = lengths[1..]
            .iter()
            .map(|l| match (&lengths[0], l) {
                (Some(l1), Some(lk)) => Some(l1 - lk),
                _ => None,
            })
            .collect();
        rows.push(ParabolicRow {
            n,
            trace,
            lengths,
            still_elliptic,
            direction,
            differences,
        });
    }
    Ok(ParabolicReport {
        a,
        b,
        embeddings: embeddings.to_vec(),
        limits,
        rows,
        bits,
    })
}
