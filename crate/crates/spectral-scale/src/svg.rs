//! Deterministic SVG emission for planar regions and curves.
//!
//! Identical inputs produce byte-identical documents: the viewBox is the
//! joint bounding box of all drawables plus a 5% margin, drawables render
//! in input order with a fixed palette, and no timestamps or generator
//! metadata are written.

use std::fmt::Write as _;
use thiserror::Error;

use crate::eigen::C64;
use crate::numrange::ConvexRegion2D;

/// Errors raised by the SVG emitter.
#[derive(Debug, Error)]
pub enum SvgError {
    /// Nothing to draw.
    #[error("empty drawable list")]
    Empty,
    /// A drawable carried no points.
    #[error("drawable {0:?} has no points")]
    NoPoints(String),
}

/// One plottable element in the complex plane.
#[derive(Debug, Clone)]
pub enum Drawable {
    /// A convex region drawn as a closed path (filled unless degenerate).
    Region { label: String, boundary: Vec<C64> },
    /// A curve drawn as a stroked polyline, optionally closed.
    Curve {
        label: String,
        points: Vec<C64>,
        closed: bool,
    },
}

impl Drawable {
    /// Wrap a computed region for plotting.
    pub fn region(label: impl Into<String>, region: &ConvexRegion2D) -> Self {
        Self::Region {
            label: label.into(),
            boundary: region.boundary.clone(),
        }
    }

    pub fn curve(label: impl Into<String>, points: Vec<C64>, closed: bool) -> Self {
        Self::Curve {
            label: label.into(),
            points,
            closed,
        }
    }

    fn label(&self) -> &str {
        match self {
            Self::Region { label, .. } | Self::Curve { label, .. } => label,
        }
    }

    fn points(&self) -> &[C64] {
        match self {
            Self::Region { boundary, .. } => boundary,
            Self::Curve { points, .. } => points,
        }
    }
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// Whether all points lie on one straight segment (within a relative slack),
/// in which case a filled path would be invisible or misleading.
fn is_degenerate(points: &[C64]) -> bool {
    if points.len() < 3 {
        return true;
    }
    // Chord between the two most distant points; degenerate when every
    // point sits on it.
    let (mut a, mut b, mut best) = (points[0], points[0], 0.0f64);
    for p in points {
        for q in points {
            let d = (p - q).norm();
            if d > best {
                best = d;
                a = *p;
                b = *q;
            }
        }
    }
    if best == 0.0 {
        return true;
    }
    let dir = (b - a) / best;
    points.iter().all(|p| {
        let rel = p - a;
        let off = (rel - dir * (rel.re * dir.re + rel.im * dir.im)).norm();
        off <= 1e-9 * best
    })
}

fn path_data(points: &[C64], closed: bool) -> String {
    let mut d = String::new();
    for (k, p) in points.iter().enumerate() {
        let cmd = if k == 0 { 'M' } else { 'L' };
        // SVG y grows downward; flip the imaginary axis.
        write!(d, "{cmd}{} {} ", p.re, -p.im).expect("string write");
    }
    if closed {
        d.push('Z');
    } else {
        d.truncate(d.trim_end().len());
    }
    d
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
        .replace('\'', "&apos;")
}

/// Render drawables to a standalone SVG document.
pub fn emit_svg(drawables: &[Drawable]) -> Result<String, SvgError> {
    if drawables.is_empty() {
        return Err(SvgError::Empty);
    }
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for d in drawables {
        if d.points().is_empty() {
            return Err(SvgError::NoPoints(d.label().to_string()));
        }
        for p in d.points() {
            min_x = min_x.min(p.re);
            max_x = max_x.max(p.re);
            min_y = min_y.min(-p.im);
            max_y = max_y.max(-p.im);
        }
    }
    let span = (max_x - min_x).max(max_y - min_y).max(1e-12);
    let pad = 0.05 * span;
    let (x0, y0) = (min_x - pad, min_y - pad);
    let (w, h) = (max_x - min_x + 2.0 * pad, max_y - min_y + 2.0 * pad);
    let stroke = 0.006 * span;

    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{x0} {y0} {w} {h}\">"
    )
    .expect("string write");
    // Axis marks at Re = 0 and Im = 0 where they cross the box.
    let axis_width = stroke * 0.5;
    if x0 <= 0.0 && 0.0 <= x0 + w {
        writeln!(
            svg,
            "  <line x1=\"0\" y1=\"{y0}\" x2=\"0\" y2=\"{}\" stroke=\"#999999\" stroke-width=\"{axis_width}\"/>",
            y0 + h
        )
        .expect("string write");
    }
    if y0 <= 0.0 && 0.0 <= y0 + h {
        writeln!(
            svg,
            "  <line x1=\"{x0}\" y1=\"0\" x2=\"{}\" y2=\"0\" stroke=\"#999999\" stroke-width=\"{axis_width}\"/>",
            x0 + w
        )
        .expect("string write");
    }
    for (k, d) in drawables.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let title = escape(d.label());
        match d {
            Drawable::Region { boundary, .. } => {
                if is_degenerate(boundary) {
                    // A flat region paints as a stroked segment, never as a
                    // filled path.
                    writeln!(
                        svg,
                        "  <path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{stroke}\" stroke-linecap=\"round\"><title>{title}</title></path>",
                        path_data(boundary, false)
                    )
                    .expect("string write");
                } else {
                    writeln!(
                        svg,
                        "  <path d=\"{}\" fill=\"{color}\" fill-opacity=\"0.15\" stroke=\"{color}\" stroke-width=\"{stroke}\"><title>{title}</title></path>",
                        path_data(boundary, true)
                    )
                    .expect("string write");
                }
            }
            Drawable::Curve { points, closed, .. } => {
                writeln!(
                    svg,
                    "  <path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{stroke}\" stroke-dasharray=\"{} {}\"><title>{title}</title></path>",
                    path_data(points, *closed),
                    stroke * 3.0,
                    stroke * 2.0
                )
                .expect("string write");
            }
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numrange;
    use crate::operators::{self, ModelKind};

    #[test]
    fn empty_list_is_an_error() {
        assert!(matches!(emit_svg(&[]), Err(SvgError::Empty)));
        let no_points = Drawable::curve("empty", vec![], false);
        assert!(matches!(emit_svg(&[no_points]), Err(SvgError::NoPoints(_))));
    }

    #[test]
    fn triangle_region_renders_closed_filled_path_with_axes() {
        let model =
            operators::diagonal_model(&[C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0)])
                .unwrap();
        let region = numrange::boundary_w(&model, 360).unwrap();
        let svg = emit_svg(&[Drawable::region("range", &region)]).unwrap();
        assert!(svg.contains("viewBox="));
        assert!(svg.contains('Z'), "region path is closed");
        assert!(svg.contains("fill=\"#1f77b4\""), "region path is filled");
        assert_eq!(svg.matches("<line").count(), 2, "both axis marks appear");
        assert!(!svg.contains("timestamp"));
    }

    #[test]
    fn hermitian_range_renders_as_stroked_segment() {
        let model = operators::diagonal_model(&[
            C64::new(1.0, 0.0),
            C64::new(0.5, 0.0),
            C64::new(-0.25, 0.0),
        ])
        .unwrap();
        let region = numrange::boundary_w(&model, 360).unwrap();
        let svg = emit_svg(&[Drawable::region("interval", &region)]).unwrap();
        assert!(svg.contains("fill=\"none\""), "degenerate region is not filled");
        assert!(!svg.contains("fill=\"#1f77b4\""));
    }

    #[test]
    fn emission_is_deterministic_and_order_fixed() {
        let model = operators::random_model(ModelKind::Generic, 3, 4).unwrap();
        let w = numrange::boundary_w(&model, 120).unwrap();
        let drawables = [
            Drawable::region("numerical range", &w),
            Drawable::curve("overlay", w.boundary.clone(), true),
        ];
        let a = emit_svg(&drawables).unwrap();
        let b = emit_svg(&drawables).unwrap();
        assert_eq!(a, b);
        let first = a.find("#1f77b4").unwrap();
        let second = a.find("#d62728").unwrap();
        assert!(first < second, "palette follows input order");
    }
}
