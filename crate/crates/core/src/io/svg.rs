//! Deterministic SVG: the unit circle, one polyline per curve, older frames fading out.

use std::fmt::Write;

use crate::geometry::{closed_polyline, phi_inv, Model, SampledCurve, Vec2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    pub size: u32,
    pub stroke_width: f64,
    /// Opacity of the oldest overlay frame; the last one is drawn opaque.
    pub min_opacity: f64,
    /// Half-plane curves are drawn in the disk through the Cayley map.
    pub to_disk: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { size: 600, stroke_width: 1.5, min_opacity: 0.1, to_disk: true }
    }
}

fn f(x: f64) -> String {
    // fixed precision keeps output byte-stable and small
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

/// SVG document for `curves`; later curves are drawn on top with increasing opacity.
pub fn render_svg(curves: &[&SampledCurve], opts: &SvgOptions) -> String {
    let size = opts.size as f64;
    let half = size / 2.0;
    let scale = 0.45 * size;
    let screen = |p: Vec2| (half + scale * p.x, half - scale * p.y);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#,
        s = opts.size
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<circle cx="{c}" cy="{c}" r="{r}" fill="none" stroke="black" stroke-width="1"/>"#,
        c = f(half),
        r = f(scale)
    );
    let n = curves.len();
    for (k, c) in curves.iter().enumerate() {
        let opacity = if n <= 1 { 1.0 } else { opts.min_opacity + (1.0 - opts.min_opacity) * k as f64 / (n - 1) as f64 };
        let mut pts = closed_polyline(c);
        if c.model == Model::HalfPlane && opts.to_disk {
            pts = pts.into_iter().map(phi_inv).collect();
        }
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = screen(*p);
            if i > 0 {
                d.push(' ');
            }
            let _ = write!(d, "{},{}", f(x), f(y));
        }
        let _ = writeln!(
            out,
            r#"<polyline points="{d}" fill="none" stroke="steelblue" stroke-width="{}" stroke-opacity="{}"/>"#,
            f(opts.stroke_width),
            f(opacity)
        );
    }
    out.push_str("</svg>\n");
    out
}
