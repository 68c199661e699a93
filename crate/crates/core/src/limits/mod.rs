//! Limit-set sampling: translation-direction clouds and their hulls, boundary
//! clouds on the torus, the parabolic family, Zariski density and the search
//! for mixed elements.

mod mixed;
mod parabolic;
mod torus;
mod zariski;

pub use mixed::{find_mixed_witness, MixedWitness, SearchBudget, SlotTarget};
pub use parabolic::{parabolic_family, ParabolicReport, ParabolicRow};
pub use torus::{
    anchored_discrepancy, empty_box_statistic, furstenberg_cloud, rotation_number, torus_orbit,
    TorusCloud,
};
pub use zariski::{zariski_check, ZariskiReport, ZariskiVerdict, ZariskiWitness};

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groups::{enumerate, GroupSpec};
use crate::moebius::{classify, direction_from_classes, Direction, DirectionKind, ElementClass};
use crate::par;

/// Sampling context attached to every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleMeta {
    pub group: String,
    pub depth: usize,
    pub cap: usize,
    pub bits: u32,
    pub enumerated: usize,
    pub truncated: bool,
}

#[derive(Clone, Debug)]
pub struct DirectionCloud {
    pub r: usize,
    pub directions: Vec<Direction>,
    /// `φ_i(tr g)` per used embedding, parallel to `directions`.
    pub traces: Vec<Vec<f64>>,
    pub meta: SampleMeta,
}

impl DirectionCloud {
    pub fn regular(&self) -> impl Iterator<Item = &Direction> {
        self.directions
            .iter()
            .filter(|d| d.kind == DirectionKind::Regular)
    }

    /// Columns: `word,tr_1..tr_r,len_1..len_r,x_1..x_r,kind`.
    pub fn to_csv(&self) -> String {
        let r = self.r;
        let mut out = String::from("word");
        for prefix in ["tr", "len", "x"] {
            for k in 1..=r {
                write!(out, ",{prefix}_{k}").unwrap();
            }
        }
        out.push_str(",kind\n");
        for (d, t) in self.directions.iter().zip(&self.traces) {
            out.push_str(d.word.as_deref().unwrap_or(""));
            for v in t {
                write!(out, ",{v:.12}").unwrap();
            }
            for l in &d.lengths {
                write!(out, ",{:.12}", l.mid_f64()).unwrap();
            }
            for x in d.coords_f64() {
                write!(out, ",{x:.12}").unwrap();
            }
            let kind = match d.kind {
                DirectionKind::Regular => "regular",
                DirectionKind::Mixed => "mixed",
            };
            writeln!(out, ",{kind}").unwrap();
        }
        out
    }
}

/// `L(g)` for every enumerated `g` with at least one hyperbolic factor.
pub fn direction_cloud(
    spec: &GroupSpec,
    depth: usize,
    cap: usize,
    bits: u32,
) -> Result<DirectionCloud> {
    if spec.r() < 2 {
        return Err(Error::DegreeOne);
    }
    let run = enumerate(spec, depth, cap);
    let emb = &spec.embeddings;
    let found = par::map(&run.elements, |e| {
        // only the hyperbolic/non-hyperbolic split matters here
        let classes: Vec<ElementClass> = emb.iter().map(|&i| classify(&e.element, i, 1)).collect();
        if !classes.contains(&ElementClass::Hyperbolic) {
            return None;
        }
        let mut d = direction_from_classes(&e.element, emb, &classes, bits).ok()?;
        d.word = Some(run.word_string(&e.word));
        let tr = e.element.trace();
        Some((d, emb.iter().map(|&i| tr.to_f64(i)).collect::<Vec<f64>>()))
    });
    let (directions, traces) = found.into_iter().flatten().unzip();
    Ok(DirectionCloud {
        r: spec.r(),
        directions,
        traces,
        meta: SampleMeta {
            group: spec.label.clone(),
            depth,
            cap,
            bits,
            enumerated: run.len(),
            truncated: run.truncated,
        },
    })
}

/// Summary of `ℓ_2/ℓ_1` over an `r = 2` cloud.
#[derive(Clone, Debug, Serialize)]
pub struct RatioSummary {
    pub min: f64,
    pub max: f64,
    pub min_word: Option<String>,
    pub max_word: Option<String>,
    /// Largest distance between consecutive distinct sorted ratios.
    pub max_gap: f64,
    /// Left end of the largest gap.
    pub gap_start: f64,
    pub distinct: usize,
}

/// Convex hull of the cloud projected to the simplex `x_1 + … + x_r = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct SimplexHull {
    /// Affine dimension of the projected points.
    pub dimension: usize,
    /// Hull vertices in simplex coordinates, counter-clockwise (`r = 3` only).
    pub vertices: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeReport {
    pub r: usize,
    pub samples: usize,
    pub regular: usize,
    pub mixed: usize,
    pub ratio: Option<RatioSummary>,
    pub hull: Option<SimplexHull>,
    /// `x_1 ≥ x_k` holds for every sample.
    pub halfspace: bool,
    pub halfspace_violations: usize,
    /// `min, max` of each coordinate over the samples.
    pub coordinate_ranges: Vec<(f64, f64)>,
    #[serde(skip)]
    pub ratios: Vec<f64>,
}

impl ConeReport {
    pub fn to_json(&self, meta: &SampleMeta) -> Value {
        let mut v = serde_json::to_value(self).unwrap();
        v["schema"] = json!("1");
        v["sampling"] = serde_json::to_value(meta).unwrap();
        v
    }
}

fn ratio_of(d: &Direction) -> f64 {
    match d.ratio(1) {
        Some(r) => r.mid_f64(),
        None => f64::INFINITY,
    }
}

/// Largest gap between consecutive values after sorting and merging values
/// closer than `1e-12`. Returns `(gap, left end, distinct count)`.
pub fn max_gap(values: &[f64]) -> (f64, f64, usize) {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut best = (0.0, v.first().copied().unwrap_or(0.0));
    for w in v.windows(2) {
        if w[1] - w[0] > best.0 {
            best = (w[1] - w[0], w[0]);
        }
    }
    (best.0, best.1, v.len())
}

pub fn cone_hull(cloud: &[Direction]) -> Result<ConeReport> {
    let Some(first) = cloud.first() else {
        return Err(Error::EmptyCloud);
    };
    let r = first.coords.len();
    let regular = cloud
        .iter()
        .filter(|d| d.kind == DirectionKind::Regular)
        .count();
    let violations = cloud.iter().filter(|d| !d.first_dominates).count();
    let pts: Vec<Vec<f64>> = cloud.iter().map(Direction::coords_f64).collect();
    let coordinate_ranges = (0..r)
        .map(|k| {
            pts.iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                    (lo.min(p[k]), hi.max(p[k]))
                })
        })
        .collect();
    let mut report = ConeReport {
        r,
        samples: cloud.len(),
        regular,
        mixed: cloud.len() - regular,
        ratio: None,
        hull: None,
        halfspace: violations == 0,
        halfspace_violations: violations,
        coordinate_ranges,
        ratios: Vec::new(),
    };
    if r == 2 {
        let ratios: Vec<f64> = cloud.iter().map(ratio_of).collect();
        let (mut imin, mut imax) = (0, 0);
        for (k, x) in ratios.iter().enumerate() {
            if *x < ratios[imin] {
                imin = k;
            }
            if *x > ratios[imax] {
                imax = k;
            }
        }
        let (gap, gap_start, distinct) = max_gap(&ratios);
        report.ratio = Some(RatioSummary {
            min: ratios[imin],
            max: ratios[imax],
            min_word: cloud[imin].word.clone(),
            max_word: cloud[imax].word.clone(),
            max_gap: gap,
            gap_start,
            distinct,
        });
        report.ratios = ratios;
    } else if r >= 2 {
        let simplex: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| {
                let s: f64 = p.iter().sum();
                p.iter().map(|x| x / s).collect()
            })
            .collect();
        let vertices = (r == 3).then(|| planar_hull(&simplex));
        report.hull = Some(SimplexHull {
            dimension: affine_dimension(&simplex),
            vertices,
        });
    }
    Ok(report)
}

fn affine_dimension(pts: &[Vec<f64>]) -> usize {
    let base = &pts[0];
    let mut rows: Vec<Vec<f64>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let cols = base.len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) =
            (rank..rows.len()).max_by(|&a, &b| rows[a][c].abs().total_cmp(&rows[b][c].abs()))
        else {
            break;
        };
        if rows[piv][c].abs() < 1e-9 {
            continue;
        }
        rows.swap(rank, piv);
        for k in 0..rows.len() {
            if k != rank {
                let f = rows[k][c] / rows[rank][c];
                for j in c..cols {
                    rows[k][j] -= f * rows[rank][j];
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Monotone chain hull of points on the 2-simplex, returned in the same
/// barycentric coordinates.
fn planar_hull(simplex: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let h = 3f64.sqrt() / 2.0;
    let mut p: Vec<(f64, f64, usize)> = simplex
        .iter()
        .enumerate()
        .map(|(k, s)| (s[1] + s[2] / 2.0, s[2] * h, k))
        .collect();
    p.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    p.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
    if p.len() < 3 {
        return p.iter().map(|q| simplex[q.2].clone()).collect();
    }
    let cross = |o: &(f64, f64, usize), a: &(f64, f64, usize), b: &(f64, f64, usize)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<(f64, f64, usize)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64, usize)>> = if pass == 0 {
            Box::new(p.iter())
        } else {
            Box::new(p.iter().rev())
        };
        for q in iter {
            while hull.len() >= start + 2
                && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], q) <= 1e-15
            {
                hull.pop();
            }
            hull.push(*q);
        }
        hull.pop();
    }
    hull.iter().map(|q| simplex[q.2].clone()).collect()
}
