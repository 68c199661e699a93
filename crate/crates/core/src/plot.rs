//! Deterministic SVG plots: fixed viewport, fixed number formatting, no
//! timestamps, so equal inputs give byte-identical output.

use std::fmt::Write as _;

use crate::error::{Error, Result};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotStyle {
    TorusScatter,
    RatioScatter,
    RatioHistogram,
}

fn header(title: &str) -> String {
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle">{}</text>"#,
        SIZE / 2.0,
        escape(title)
    )
    .unwrap();
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn frame(s: &mut String, xlabel: &str, ylabel: &str, xmax: f64) {
    let w = SIZE - 2.0 * MARGIN;
    writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{w}" height="{w}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        SIZE / 2.0,
        SIZE - 10.0,
        escape(xlabel)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        SIZE / 2.0,
        SIZE / 2.0,
        escape(ylabel)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{MARGIN}" y="{}" text-anchor="middle">0</text>"#,
        SIZE - MARGIN + 14.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{xmax:.3}</text>"#,
        SIZE - MARGIN,
        SIZE - MARGIN + 14.0
    )
    .unwrap();
}

fn px(x: f64) -> f64 {
    MARGIN + x * (SIZE - 2.0 * MARGIN)
}

fn py(y: f64) -> f64 {
    SIZE - MARGIN - y * (SIZE - 2.0 * MARGIN)
}

/// Scatter of points in `[0,1)²`.
pub fn torus_scatter(points: &[(f64, f64)], title: &str) -> Result<String> {
    if points.is_empty() {
        return Err(Error::EmptyData);
    }
    let mut s = header(title);
    frame(&mut s, "theta_1", "theta_2", 1.0);
    for &(x, y) in points {
        writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="1.2" fill="navy"/>"#,
            px(x),
            py(y)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn ratio_axis(ratios: &[f64]) -> Result<(Vec<f64>, f64)> {
    let finite: Vec<f64> = ratios.iter().copied().filter(|r| r.is_finite()).collect();
    if finite.is_empty() {
        return Err(Error::EmptyData);
    }
    let xmax = finite.iter().copied().fold(1.0, f64::max);
    Ok((finite, xmax))
}

/// Ratios `ℓ_2/ℓ_1` as markers on a horizontal axis; the axis always
/// includes `[0, 1]`.
pub fn ratio_scatter(ratios: &[f64], title: &str) -> Result<String> {
    let (finite, xmax) = ratio_axis(ratios)?;
    let mut s = header(title);
    frame(&mut s, "l2 / l1", "sample", xmax);
    let n = finite.len().max(2) as f64 - 1.0;
    for (k, r) in finite.iter().enumerate() {
        writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="1.2" fill="darkred"/>"#,
            px(r / xmax),
            py(k as f64 / n)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn ratio_histogram(ratios: &[f64], bins: usize, title: &str) -> Result<String> {
    let (finite, xmax) = ratio_axis(ratios)?;
    let bins = bins.max(1);
    let mut counts = vec![0usize; bins];
    for r in &finite {
        counts[((r / xmax * bins as f64) as usize).min(bins - 1)] += 1;
    }
    let top = *counts.iter().max().unwrap() as f64;
    let mut s = header(title);
    frame(&mut s, "l2 / l1", "count", xmax);
    let bw = (SIZE - 2.0 * MARGIN) / bins as f64;
    for (k, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let h = c as f64 / top * (SIZE - 2.0 * MARGIN);
        writeln!(
            s,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="steelblue"/>"#,
            MARGIN + k as f64 * bw,
            SIZE - MARGIN - h,
            bw,
            h
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_marker() {
        let svg = torus_scatter(&[(0.25, 0.5)], "one").unwrap();
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains(r#"cx="140.00" cy="240.00""#));
        assert_eq!(svg, torus_scatter(&[(0.25, 0.5)], "one").unwrap());
    }

    #[test]
    fn empty_rejected() {
        assert_eq!(torus_scatter(&[], "x").unwrap_err(), Error::EmptyData);
        assert_eq!(
            ratio_histogram(&[f64::INFINITY], 10, "x").unwrap_err(),
            Error::EmptyData
        );
    }
}
