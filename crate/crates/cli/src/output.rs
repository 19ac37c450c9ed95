//! Boundary CSV tables and SVG overlays.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::run::{Marker, MarkerKind};

/// `phi,re_z,im_z` rows with 17 significant digits.
pub fn boundary_csv(phi: &[f64], z: &[Complex64]) -> String {
    let mut out = String::from("phi,re_z,im_z\n");
    for (f, z) in phi.iter().zip(z) {
        writeln!(out, "{f:.16e},{:.16e},{:.16e}", z.re, z.im).unwrap();
    }
    out
}

pub fn table_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// One curve group of the overlay: its subpaths and whether it is physical.
pub struct SvgItem<'a> {
    pub curves: &'a [Vec<Complex64>],
    pub univalent: bool,
}

const MAX_PATH_POINTS: usize = 512;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Self-contained overlay: one `<path>` per item, dashed when the curve is
/// not univalent, and one marker per distinct charge or singularity. The
/// view box fits everything with a 5% margin; `y` points up.
pub fn overlay_svg(title: &str, items: &[SvgItem<'_>], markers: &[Marker]) -> String {
    let mut markers_unique: Vec<Marker> = Vec::new();
    for m in markers {
        if !markers_unique.iter().any(|u| u.kind == m.kind && (u.position - m.position).norm() < 1e-12) {
            markers_unique.push(*m);
        }
    }
    let points = items.iter().flat_map(|i| i.curves.iter().flatten()).chain(markers_unique.iter().map(|m| &m.position));
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for z in points {
        x0 = x0.min(z.re);
        x1 = x1.max(z.re);
        y0 = y0.min(-z.im);
        y1 = y1.max(-z.im);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let margin = 0.05 * span;
    let (vx, vy, vw, vh) = (x0 - margin, y0 - margin, x1 - x0 + 2.0 * margin, y1 - y0 + 2.0 * margin);
    let r = 0.008 * span;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{vx:.6} {vy:.6} {vw:.6} {vh:.6}" width="800" height="{:.0}">"#,
        800.0 * vh / vw
    )
    .unwrap();
    writeln!(s, "<title>{title}</title>").unwrap();
    writeln!(s, r#"<rect x="{vx:.6}" y="{vy:.6}" width="{vw:.6}" height="{vh:.6}" fill="white"/>"#).unwrap();
    for (k, item) in items.iter().enumerate() {
        let mut d = String::new();
        for curve in item.curves {
            let stride = curve.len().div_ceil(MAX_PATH_POINTS).max(1);
            for (j, z) in curve.iter().step_by(stride).enumerate() {
                let cmd = if j == 0 { 'M' } else { 'L' };
                write!(d, "{cmd}{:.6},{:.6} ", z.re, -z.im).unwrap();
            }
            d.push('Z');
        }
        let dash = if item.univalent { "" } else { r#" stroke-dasharray="6 4""# };
        writeln!(
            s,
            r#"<path d="{}" fill="none" stroke="{}" stroke-width="1.5" vector-effect="non-scaling-stroke"{dash}><title>curve {}</title></path>"#,
            d.trim_end(),
            PALETTE[k % PALETTE.len()],
            k + 1
        )
        .unwrap();
    }
    for m in &markers_unique {
        let (fill, label) = match m.kind {
            MarkerKind::Charge => ("black", "charge"),
            MarkerKind::Singularity => ("white", "singularity"),
        };
        writeln!(
            s,
            r#"<circle cx="{:.6}" cy="{:.6}" r="{r:.6}" fill="{fill}" stroke="black" vector-effect="non-scaling-stroke"><title>{label}</title></circle>"#,
            m.position.re, -m.position.im
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn csv_format() {
        let text = boundary_csv(&[0.0, 0.5], &[c(1.0, 0.0), c(-0.25, 1.0 / 3.0)]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "phi,re_z,im_z");
        assert_eq!(lines[1], "0.0000000000000000e0,1.0000000000000000e0,0.0000000000000000e0");
        assert!(lines[2].ends_with("3.3333333333333331e-1"));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn svg_counts_paths_and_markers() {
        let a = vec![vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]];
        let b = vec![vec![c(2.0, 0.0), c(0.0, 2.0), c(-2.0, 0.0)]];
        let items = [SvgItem { curves: &a, univalent: true }, SvgItem { curves: &b, univalent: false }];
        let markers = [
            Marker { kind: MarkerKind::Charge, position: c(0.0, 0.0) },
            Marker { kind: MarkerKind::Charge, position: c(0.0, 0.0) },
            Marker { kind: MarkerKind::Singularity, position: c(0.5, 0.0) },
        ];
        let svg = overlay_svg("t", &items, &markers);
        assert_eq!(svg.matches("<path").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 2);
        assert_eq!(svg.matches("stroke-dasharray").count(), 1);
        assert!(svg.contains(r#"viewBox="-2.200000 -2.200000 4.400000 2.400000""#), "{svg}");
    }
}
