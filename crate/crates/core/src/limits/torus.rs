//! Point clouds on the torus `(ℝ/ℤ)^r`: attracting fixed points of
//! hyperbolic tuples, and orbits of a pair of rotations.
//!
//! Boundary points are charted by `x ↦ arctan(x)/π mod 1`, so `0 ↦ 0`,
//! `±1 ↦ ±1/4` and `∞ ↦ 1/2`. Every statistic below depends on this chart.

use serde::Serialize;
use serde_json::{json, Value};

use super::SampleMeta;
use crate::error::{Error, Result};
use crate::groups::{enumerate, GroupSpec};
use crate::interval::Interval;
use crate::moebius::{classify, fixed_points, ElementClass, FixedPoints};
use crate::numfield::FieldElement;
use crate::par;

#[derive(Clone, Debug, Serialize)]
pub struct TorusCloud {
    pub points: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub words: Vec<String>,
    pub grid: usize,
    /// Side of the largest empty grid-aligned square, as a fraction of 1.
    pub statistic: f64,
    /// Anchored box-count discrepancy (orbits only).
    pub discrepancy: Option<f64>,
    pub meta: Option<SampleMeta>,
}

impl TorusCloud {
    /// Columns: `word,theta_1..theta_r` (word empty for orbits).
    pub fn to_csv(&self) -> String {
        let r = self.points.first().map_or(2, Vec::len);
        let mut out = String::from("word");
        for k in 1..=r {
            out.push_str(&format!(",theta_{k}"));
        }
        out.push('\n');
        for (n, p) in self.points.iter().enumerate() {
            out.push_str(self.words.get(n).map_or("", String::as_str));
            for x in p {
                out.push_str(&format!(",{x:.12}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn summary_json(&self) -> Value {
        json!({
            "schema": "1",
            "points": self.points.len(),
            "grid": self.grid,
            "statistic": self.statistic,
            "discrepancy": self.discrepancy,
            "chart": "arctan(x)/pi mod 1",
            "sampling": self.meta,
        })
    }
}

fn cell(x: f64, grid: usize) -> usize {
    ((x.rem_euclid(1.0) * grid as f64) as usize).min(grid - 1)
}

/// Largest empty square of grid cells on the `grid × grid` torus spanned by
/// coordinates `a`, `b`, as a fraction of the side.
fn empty_square(points: &[Vec<f64>], a: usize, b: usize, grid: usize) -> f64 {
    let mut occupied = vec![false; grid * grid];
    for p in points {
        occupied[cell(p[a], grid) * grid + cell(p[b], grid)] = true;
    }
    // unroll the torus twice in each direction; squares wider than the
    // torus are clipped to it
    let n = 2 * grid;
    let mut dp = vec![0usize; n * n];
    let mut best = 0;
    for i in 0..n {
        for j in 0..n {
            if occupied[(i % grid) * grid + (j % grid)] {
                continue;
            }
            let v = if i == 0 || j == 0 {
                1
            } else {
                1 + dp[(i - 1) * n + j]
                    .min(dp[i * n + j - 1])
                    .min(dp[(i - 1) * n + j - 1])
            };
            dp[i * n + j] = v;
            best = best.max(v);
        }
    }
    best.min(grid) as f64 / grid as f64
}

/// Maximum over coordinate pairs of the largest empty square. An empty cloud
/// scores 1, a single point `1 - 1/grid`.
pub fn empty_box_statistic(points: &[Vec<f64>], grid: usize) -> f64 {
    let grid = grid.max(1);
    let r = points.first().map_or(2, Vec::len);
    let mut best: f64 = 0.0;
    for a in 0..r {
        for b in a + 1..r {
            best = best.max(empty_square(points, a, b, grid));
        }
    }
    best
}

/// `max |#(points in [0,i/g)×[0,j/g)) / N - ij/g²|` over the grid corners,
/// using the first two coordinates.
pub fn anchored_discrepancy(points: &[Vec<f64>], grid: usize) -> f64 {
    if points.is_empty() {
        return 1.0;
    }
    let g = grid.max(1);
    let mut counts = vec![0usize; (g + 1) * (g + 1)];
    for p in points {
        counts[(cell(p[0], g) + 1) * (g + 1) + cell(p[1], g) + 1] += 1;
    }
    for i in 1..=g {
        for j in 1..=g {
            counts[i * (g + 1) + j] += counts[(i - 1) * (g + 1) + j] + counts[i * (g + 1) + j - 1]
                - counts[(i - 1) * (g + 1) + j - 1];
        }
    }
    let n = points.len() as f64;
    let mut worst: f64 = 0.0;
    for i in 1..=g {
        for j in 1..=g {
            let area = (i * j) as f64 / (g * g) as f64;
            worst = worst.max((counts[i * (g + 1) + j] as f64 / n - area).abs());
        }
    }
    worst
}

/// Attracting fixed points of every enumerated element that is hyperbolic in
/// all used embeddings.
pub fn furstenberg_cloud(
    spec: &GroupSpec,
    depth: usize,
    cap: usize,
    bits: u32,
    grid: usize,
) -> Result<TorusCloud> {
    if spec.r() < 2 {
        return Err(Error::DegreeOne);
    }
    let run = enumerate(spec, depth, cap);
    let emb = &spec.embeddings;
    let found = par::map(&run.elements, |e| {
        if !emb
            .iter()
            .all(|&i| classify(&e.element, i, 1) == ElementClass::Hyperbolic)
        {
            return None;
        }
        let mut p = Vec::with_capacity(emb.len());
        for &i in emb {
            match fixed_points(&e.element, i, bits) {
                Ok(FixedPoints::Hyperbolic { attracting, .. }) => p.push(attracting.chart()),
                _ => return None,
            }
        }
        Some((run.word_string(&e.word), p))
    });
    let (words, points): (Vec<String>, Vec<Vec<f64>>) = found.into_iter().flatten().unzip();
    let statistic = empty_box_statistic(&points, grid);
    Ok(TorusCloud {
        points,
        words,
        grid,
        statistic,
        discrepancy: None,
        meta: Some(SampleMeta {
            group: spec.label.clone(),
            depth,
            cap,
            bits,
            enumerated: run.len(),
            truncated: run.truncated,
        }),
    })
}

/// `arccos(φ_i(t)/2)/π` for an elliptic trace `|φ_i(t)| < 2`. The enclosure
/// is computed in floating point and padded by `1e-14`.
pub fn rotation_number(t: &FieldElement, i: usize) -> Result<Interval> {
    let four = FieldElement::from_int(t.field(), 4);
    if (&t.square() - &four).sign_at(i) != std::cmp::Ordering::Less {
        return Err(Error::NotElliptic);
    }
    let x = t.embed(i, 64)?;
    let pad = 1e-14;
    let lo = ((x.hi_f64() / 2.0).clamp(-1.0, 1.0).acos() / std::f64::consts::PI - pad).max(0.0);
    let hi = ((x.lo_f64() / 2.0).clamp(-1.0, 1.0).acos() / std::f64::consts::PI + pad).min(1.0);
    let q = |v: f64| num_rational::BigRational::from_float(v).expect("finite");
    Ok(Interval::new(q(lo), q(hi)))
}

/// `{(kα mod 1, kβ mod 1) : k = 1..n}` with the empty-square statistic and
/// the anchored discrepancy.
pub fn torus_orbit(alpha: &Interval, beta: &Interval, n: usize, grid: usize) -> Result<TorusCloud> {
    if n == 0 {
        return Err(Error::EmptyData);
    }
    let (a, b) = (alpha.mid_f64(), beta.mid_f64());
    let points: Vec<Vec<f64>> = (1..=n)
        .map(|k| {
            let k = k as f64;
            vec![(k * a).rem_euclid(1.0), (k * b).rem_euclid(1.0)]
        })
        .collect();
    let statistic = empty_box_statistic(&points, grid);
    let discrepancy = Some(anchored_discrepancy(&points, grid));
    Ok(TorusCloud {
        points,
        words: Vec::new(),
        grid,
        statistic,
        discrepancy,
        meta: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_leaves_almost_everything_empty() {
        assert_eq!(empty_box_statistic(&[vec![0.3, 0.7]], 64), 63.0 / 64.0);
        assert_eq!(empty_box_statistic(&[], 64), 1.0);
    }

    #[test]
    fn diagonal_blocks_half() {
        let pts: Vec<Vec<f64>> = (0..1000).map(|k| vec![k as f64 / 1000.0; 2]).collect();
        assert_eq!(empty_box_statistic(&pts, 64), 0.5);
    }

    #[test]
    fn rational_rotation_gives_vertical_circles() {
        let half = Interval::point(num_rational::BigRational::new(1.into(), 2.into()));
        let beta =
            Interval::point(num_rational::BigRational::from_float(2f64.sqrt() - 1.0).unwrap());
        let cloud = torus_orbit(&half, &beta, 2000, 64).unwrap();
        assert!(cloud.points.iter().all(|p| p[0] == 0.0 || p[0] == 0.5));
        assert!(cloud.discrepancy.unwrap() > 0.2);
    }
}
