//! Browser bindings: each export returns an SVG document as a string.
//! The plain functions in [`demo`] do the work and are usable natively.

use wasm_bindgen::prelude::*;

pub mod demo {
    use num_rational::BigRational;

    use limitcone::groups::GroupSpec;
    use limitcone::interval::Interval;
    use limitcone::limits::{cone_hull, direction_cloud, furstenberg_cloud, torus_orbit};
    use limitcone::{plot, Result};

    /// Enumeration cap; keeps the page responsive.
    pub const CAP: usize = 20_000;
    /// Most markers drawn for an orbit.
    pub const MAX_MARKERS: usize = 5_000;

    pub fn cone_svg(group: &str, depth: usize) -> Result<String> {
        let spec = GroupSpec::builtin(group)?;
        let cloud = direction_cloud(&spec, depth, CAP, 48)?;
        let rep = cone_hull(&cloud.directions)?;
        let title = format!("{} depth {}: {} samples", spec.label, depth, rep.samples);
        plot::ratio_histogram(&rep.ratios, 40, &title)
    }

    pub fn furstenberg_svg(group: &str, depth: usize, grid: usize) -> Result<String> {
        let spec = GroupSpec::builtin(group)?;
        let cloud = furstenberg_cloud(&spec, depth, CAP, 48, grid.max(1))?;
        let pts: Vec<(f64, f64)> = cloud.points.iter().map(|p| (p[0], p[1])).collect();
        let title = format!(
            "{} depth {}: empty square {:.3}",
            spec.label, depth, cloud.statistic
        );
        plot::torus_scatter(&pts, &title)
    }

    pub fn torus_orbit_svg(alpha: f64, beta: f64, n: usize) -> Result<String> {
        let point = |x: f64| {
            let q = BigRational::from_float(x).unwrap_or_default();
            Interval::new(q.clone(), q)
        };
        let cloud = torus_orbit(&point(alpha), &point(beta), n, 64)?;
        let pts: Vec<(f64, f64)> = cloud
            .points
            .iter()
            .take(MAX_MARKERS)
            .map(|p| (p[0], p[1]))
            .collect();
        let title = format!(
            "N = {n}: discrepancy {:.4}",
            cloud.discrepancy.unwrap_or(f64::NAN)
        );
        plot::torus_scatter(&pts, &title)
    }
}

fn js(e: limitcone::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Histogram of `ℓ_2/ℓ_1` for a builtin group such as `hecke:5`.
#[wasm_bindgen]
pub fn cone_svg(group: &str, depth: u32) -> Result<String, JsError> {
    demo::cone_svg(group, depth as usize).map_err(js)
}

/// Attracting fixed points on the torus.
#[wasm_bindgen]
pub fn furstenberg_svg(group: &str, depth: u32, grid: u32) -> Result<String, JsError> {
    demo::furstenberg_svg(group, depth as usize, grid as usize).map_err(js)
}

/// Orbit `k ↦ (kα, kβ)` on the torus.
#[wasm_bindgen]
pub fn torus_orbit_svg(alpha: f64, beta: f64, n: u32) -> Result<String, JsError> {
    demo::torus_orbit_svg(alpha, beta, n as usize).map_err(js)
}
