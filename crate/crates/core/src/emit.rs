//! CSV and SVG renderings of sampled curves and theta series.

use std::fmt::Write as _;

use crate::bounds::BoundCurve;
use crate::error::{Error, Result};
use crate::lattice::ThetaCoefficients;
use crate::numfmt::g12;

pub const CURVE_HEADER: &str = "phi,cos_phi,R,curve";

/// One row per sample, 12 significant digits.
pub fn curves_csv(curves: &[BoundCurve]) -> Result<String> {
    if curves.is_empty() {
        return Err(Error::Empty("curve list"));
    }
    let mut s = String::from(CURVE_HEADER);
    s.push('\n');
    for c in curves {
        for p in &c.samples {
            let _ = writeln!(s, "{},{},{},{}", g12(p.phi), g12(p.cos_phi), g12(p.rate), c.name);
        }
    }
    Ok(s)
}

/// `m,count` rows.
pub fn theta_csv(theta: &ThetaCoefficients) -> String {
    let mut s = String::from("m,count\n");
    for (m, c) in theta.rows() {
        let _ = writeln!(s, "{},{}", g12(m), g12(c));
    }
    s
}

/// Horizontal axis of an SVG plot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Axis {
    #[default]
    CosPhi,
    Phi,
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

/// A single plot with labelled axes, one polyline per curve and a legend.
pub fn curves_svg(curves: &[BoundCurve], axis: Axis) -> Result<String> {
    if curves.is_empty() {
        return Err(Error::Empty("curve list"));
    }
    let xs = |c: &BoundCurve| -> Vec<(f64, f64)> {
        c.samples
            .iter()
            .map(|p| {
                let x = match axis {
                    Axis::CosPhi => p.cos_phi,
                    Axis::Phi => p.phi,
                };
                (x, p.rate)
            })
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .collect()
    };
    let all: Vec<(f64, f64)> = curves.iter().flat_map(xs).collect();
    if all.is_empty() {
        return Err(Error::Empty("curve samples"));
    }
    let (mut x0, mut x1, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let y0 = 0.0f64.min(all.iter().map(|p| p.1).fold(f64::INFINITY, f64::min));
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y1 = y0 + 1.0;
    }
    let (w, h, m) = (640.0, 480.0, 60.0);
    let px = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
    let py = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);
    let xlabel = match axis {
        Axis::CosPhi => "cos φ",
        Axis::Phi => "φ",
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/>"#,
        b = h - m,
        r = w - m
    );
    let _ = writeln!(s, r#"<line x1="{m}" y1="{m}" x2="{m}" y2="{b}" stroke="black"/>"#, b = h - m);
    for (v, anchor) in [(x0, "start"), (x1, "end")] {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="{anchor}">{}</text>"#,
            px(v),
            h - m + 16.0,
            g12(v)
        );
    }
    for v in [y0, y1] {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
            m - 6.0,
            py(v) + 4.0,
            g12(v)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{xlabel}</text>"#,
        w / 2.0,
        h - 18.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 18 {:.2})">R</text>"#,
        h / 2.0,
        h / 2.0
    );
    for (i, c) in curves.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = xs(c)
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
            pts.join(" "),
            c.name
        );
        let ly = m + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" fill="{colour}" text-anchor="end">{}</text>"#,
            w - m,
            ly,
            c.name
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{figure_curves, Figure};

    #[test]
    fn csv_and_svg_shapes() {
        let one = figure_curves(&Figure::Fig2 { phi_min: 0.1 }, 16).unwrap();
        let csv = curves_csv(&one).unwrap();
        assert_eq!(csv.lines().count(), 17);
        assert_eq!(csv.lines().next().unwrap(), CURVE_HEADER);
        let two = figure_curves(&Figure::Fig1 { ns: vec![1, 2] }, 16).unwrap();
        let svg = curves_svg(&two, Axis::CosPhi).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("rankin_n1") && svg.contains("rankin_n2"));
        assert!(curves_csv(&[]).is_err());
        assert!(curves_svg(&[], Axis::Phi).is_err());
    }
}
