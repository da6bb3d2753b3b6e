//! Deterministic SVG figures of ribbon layouts.

use std::fmt::Write;

use crate::geom::{axis_dir, to_f64, Point};
use crate::layout::RibbonLayout;

#[derive(Clone, Debug)]
pub struct RenderOptions {
    /// Pixels per unit length.
    pub scale: f64,
    pub faces: bool,
    pub folds: bool,
    /// Gap on the under-strand as a fraction of the width.
    pub gap: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            scale: 60.0,
            faces: true,
            folds: true,
            gap: 0.6,
        }
    }
}

const PALETTE: [&str; 2] = ["#3b6fb6", "#c4563a"];

fn fmt(x: f64) -> String {
    // fixed precision keeps the output byte-stable
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

pub fn render_svg(l: &RibbonLayout, opts: &RenderOptions) -> String {
    let w = to_f64(&l.params.w);
    let pts = l.loops.iter().flatten();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in pts {
        let (x, y) = (to_f64(&p.x), to_f64(&p.y));
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, y0, x1, y1) = (0.0, 0.0, 0.0, 0.0);
    }
    let pad = w;
    let s = opts.scale;
    // SVG y grows downwards
    let tx = |x: f64| (x - x0 + pad) * s;
    let ty = |y: f64| (y1 - y + pad) * s;
    let pt = |p: &Point| (tx(to_f64(&p.x)), ty(to_f64(&p.y)));
    let width = (x1 - x0 + 2.0 * pad) * s;
    let height = (y1 - y0 + 2.0 * pad) * s;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        fmt(width),
        fmt(height),
        fmt(width),
        fmt(height)
    );
    let _ = writeln!(out, "<title>({})</title>", l.notation);
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);

    if opts.faces {
        let _ = writeln!(out, r#"<g class="faces" fill-opacity="0.25" stroke="none">"#);
        for seg in l.segments() {
            let (ax, ay) = pt(&seg.from);
            let (bx, by) = pt(&seg.to);
            let h = w / 2.0 * s;
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                fmt(ax.min(bx) - h),
                fmt(ay.min(by) - h),
                fmt((ax - bx).abs() + 2.0 * h),
                fmt((ay - by).abs() + 2.0 * h),
                PALETTE[seg.component % PALETTE.len()]
            );
        }
        let _ = writeln!(out, "</g>");
    }

    if opts.folds {
        let _ = writeln!(out, r##"<g class="folds" stroke="#555555" stroke-width="1" stroke-dasharray="4 2">"##);
        for f in &l.folds {
            let (ax, ay) = pt(&f.from);
            let (bx, by) = pt(&f.to);
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                fmt(ax),
                fmt(ay),
                fmt(bx),
                fmt(by)
            );
        }
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(out, r#"<g class="core" fill="none" stroke-width="2">"#);
    for (k, lp) in l.loops.iter().enumerate() {
        let mut d = String::new();
        for (i, p) in lp.iter().enumerate() {
            let (x, y) = pt(p);
            let _ = write!(d, "{}{} {} ", if i == 0 { "M" } else { "L" }, fmt(x), fmt(y));
        }
        d.push('Z');
        let _ = writeln!(
            out,
            r#"<path d="{}" stroke="{}"/>"#,
            d,
            PALETTE[k % PALETTE.len()]
        );
    }
    let _ = writeln!(out, "</g>");

    // break the under-strand, then redraw the over-strand across the gap
    let _ = writeln!(out, r#"<g class="crossings">"#);
    let half = opts.gap * w / 2.0 * s;
    for (k, c) in l.crossings.iter().enumerate() {
        let (cx, cy) = pt(&c.position);
        let dir = |r| {
            let (a, b) = l.segment(r);
            let (dx, dy) = axis_dir(a, b).unwrap_or((1, 0));
            (dx as f64, -(dy as f64))
        };
        let (ux, uy) = dir(c.under);
        let (ox, oy) = dir(c.over);
        let _ = writeln!(
            out,
            r##"<g class="crossing" id="c{}"><line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#ffffff" stroke-width="6"/><line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="2"/></g>"##,
            k,
            fmt(cx - ux * half),
            fmt(cy - uy * half),
            fmt(cx + ux * half),
            fmt(cy + uy * half),
            fmt(cx - ox * half),
            fmt(cy - oy * half),
            fmt(cx + ox * half),
            fmt(cy + oy * half),
            PALETTE[c.over.component % PALETTE.len()]
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}
