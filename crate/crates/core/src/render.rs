//! Deterministic SVG figures. Coordinates are surface (or half-plane)
//! coordinates; the y axis is flipped once in a top-level group so the
//! viewBox reads the same way as the model.

use std::fmt::Write;

use thiserror::Error;

use crate::cylinders::{CylinderDecomposition, Direction};
use crate::fuchsian::FundamentalDomain;
use crate::numeric::QuadExt;
use crate::surface::{accumulation_point, LadderSurface, SegmentVerdict, SurfacePoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("{0} cylinders cannot be drawn in staircase coordinates")]
    UnsupportedDirection(Direction),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub stroke_width: f64,
    /// Pixel width of the output; height follows the viewBox aspect ratio.
    pub width_px: u32,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            stroke_width: 0.01,
            width_px: 800,
        }
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0.000000".to_string()
    } else {
        s
    }
}

fn pt(p: &SurfacePoint) -> (f64, f64) {
    (p.x.to_f64(), p.y.to_f64())
}

struct Canvas {
    min_x: f64,
    min_y: f64,
    width: f64,
    height: f64,
    opts: RenderOptions,
    body: Vec<String>,
}

impl Canvas {
    fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64, opts: &RenderOptions) -> Self {
        Canvas {
            min_x,
            min_y,
            width: max_x - min_x,
            height: max_y - min_y,
            opts: opts.clone(),
            body: Vec::new(),
        }
    }

    fn polyline(&mut self, points: &[(f64, f64)], closed: bool, style: &str) {
        let coords: Vec<String> = points.iter().map(|(x, y)| format!("{},{}", num(*x), num(*y))).collect();
        let tag = if closed { "polygon" } else { "polyline" };
        self.body.push(format!(
            r#"<{tag} points="{}" {style} stroke-width="{}"/>"#,
            coords.join(" "),
            num(self.opts.stroke_width)
        ));
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), style: &str) {
        self.body.push(format!(
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" {style} stroke-width="{}"/>"#,
            num(a.0),
            num(a.1),
            num(b.0),
            num(b.1),
            num(self.opts.stroke_width)
        ));
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, style: &str) {
        self.body.push(format!(
            r#"<rect x="{}" y="{}" width="{}" height="{}" {style}/>"#,
            num(x),
            num(y),
            num(w),
            num(h)
        ));
    }

    fn dot(&mut self, c: (f64, f64), r: f64, style: &str) {
        self.body.push(format!(
            r#"<circle cx="{}" cy="{}" r="{}" {style}/>"#,
            num(c.0),
            num(c.1),
            num(r)
        ));
    }

    /// Circular arc of radius `r` about `center` from angle `from` to `to`
    /// (radians, counter-clockwise in model coordinates).
    fn arc(&mut self, center: (f64, f64), r: f64, from: f64, to: f64, style: &str) {
        let start = (center.0 + r * from.cos(), center.1 + r * from.sin());
        let end = (center.0 + r * to.cos(), center.1 + r * to.sin());
        let large = if (to - from).abs() > std::f64::consts::PI { 1 } else { 0 };
        let sweep = if to > from { 1 } else { 0 };
        self.body.push(format!(
            r#"<path d="M {} {} A {} {} 0 {large} {sweep} {} {}" fill="none" {style} stroke-width="{}"/>"#,
            num(start.0),
            num(start.1),
            num(r),
            num(r),
            num(end.0),
            num(end.1),
            num(self.opts.stroke_width)
        ));
    }

    fn finish(self, title: &str) -> String {
        let height_px = (self.opts.width_px as f64 * self.height / self.width).round() as u32;
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        // the flip maps model y to -y, so the viewBox spans [-max_y, -min_y]
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{height_px}" viewBox="{} {} {} {}">"#,
            self.opts.width_px,
            num(self.min_x),
            num(-(self.min_y + self.height)),
            num(self.width),
            num(self.height)
        );
        let _ = writeln!(out, "<title>{title}</title>");
        out.push_str("<g transform=\"scale(1,-1)\">\n");
        for e in &self.body {
            out.push_str(e);
            out.push('\n');
        }
        out.push_str("</g>\n</svg>\n");
        out
    }
}

const OUTLINE: &str = r##"fill="none" stroke="#000000""##;
const TRUNCATION: &str = r##"stroke="#888888" stroke-dasharray="0.02,0.02""##;

/// Boundary of the truncated region: lower staircase out to the last
/// corner, then the mirrored staircase back.
fn outline(surface: &LadderSurface) -> Vec<(f64, f64)> {
    let lower: Vec<(f64, f64)> = surface.staircase().iter().map(pt).collect();
    let upper: Vec<(f64, f64)> = lower.iter().rev().map(|&(x, y)| (y, x)).collect();
    lower.into_iter().chain(upper).collect()
}

fn surface_canvas(surface: &LadderSurface, opts: &RenderOptions) -> Canvas {
    let s = accumulation_point(surface.params()).x.to_f64();
    let pad = 0.1;
    let mut c = Canvas::new(-pad, -pad, s + pad, s + pad, opts);
    let pts = outline(surface);
    c.polyline(&pts, true, OUTLINE);
    let n = surface.depth() as i64;
    let last = (surface.c(n).to_f64(), surface.c(n - 1).to_f64());
    c.line(last, (last.1, last.0), TRUNCATION);
    c
}

fn mark_s(c: &mut Canvas, surface: &LadderSurface) {
    let s = pt(&accumulation_point(surface.params()));
    c.dot(s, 0.02, r##"fill="#c00000""##);
}

/// The staircase with its partial-sum vertices and the point `S`.
pub fn render_surface(surface: &LadderSurface, opts: &RenderOptions) -> String {
    let mut c = surface_canvas(surface, opts);
    for v in surface.corners() {
        let (x, y) = pt(&v);
        c.dot((x, y), 0.012, r##"fill="#000000""##);
        c.dot((y, x), 0.012, r##"fill="#000000""##);
    }
    mark_s(&mut c, surface);
    let p = surface.params();
    c.finish(&format!("ladder surface k={} l={} depth={}", p.k, p.l, surface.depth()))
}

/// Cylinder `n` of the decomposition shaded over the staircase.
pub fn render_cylinders(
    surface: &LadderSurface,
    dec: &CylinderDecomposition,
    opts: &RenderOptions,
) -> Result<String, RenderError> {
    if dec.direction == Direction::Antidiagonal {
        return Err(RenderError::UnsupportedDirection(dec.direction));
    }
    let mut c = surface_canvas(surface, opts);
    let fills = ["#9ecae1", "#fdae6b"];
    for cyl in &dec.cylinders {
        let n = cyl.index as i64;
        if n >= surface.depth() as i64 {
            break;
        }
        let (lo, _) = surface.horizontal_section(n);
        let (x, w) = (lo.to_f64(), cyl.circumference.to_f64());
        let (y, h) = (surface.c(n - 1).to_f64(), cyl.height.to_f64());
        let style = format!(r##"fill="{}" fill-opacity="0.6" stroke="none""##, fills[cyl.index % 2]);
        match dec.direction {
            Direction::Horizontal => c.rect(x, y, w, h, &style),
            _ => c.rect(y, x, h, w, &style),
        }
    }
    let pts = outline(surface);
    c.polyline(&pts, true, OUTLINE);
    let p = surface.params();
    Ok(c.finish(&format!("{} cylinders k={} l={}", dec.direction, p.k, p.l)))
}

/// Unit segments leaving the corners, green when contained, red otherwise.
pub fn render_segments(
    surface: &LadderSurface,
    slope: &QuadExt,
    verdicts: &[SegmentVerdict],
    opts: &RenderOptions,
) -> String {
    let mut c = surface_canvas(surface, opts);
    let s = slope.to_f64();
    let len = (1.0 + s * s).sqrt();
    let (dx, dy) = (1.0 / len, s / len);
    for v in verdicts {
        let (x, y) = pt(&v.start);
        let color = if v.contained { "#1a9850" } else { "#d73027" };
        c.line((x, y), (x - dx, y - dy), &format!(r#"stroke="{color}""#));
    }
    mark_s(&mut c, surface);
    let p = surface.params();
    c.finish(&format!("unit segments of slope {slope} k={} l={}", p.k, p.l))
}

/// The strip, the two unit arcs meeting at `ω`, and the free side.
pub fn render_domain(dom: &FundamentalDomain, opts: &RenderOptions) -> String {
    use std::f64::consts::PI;
    let left = dom.strip_left.to_f64();
    let right = dom.strip_right.to_f64();
    let top = 3.0;
    let mut c = Canvas::new(left - 0.5, -0.2, right + 0.5, top + 0.2, opts);
    c.line((left - 0.5, 0.0), (right + 0.5, 0.0), r##"stroke="#888888""##);
    c.line((left, 0.0), (left, top), OUTLINE);
    c.line((right, 0.0), (right, top), OUTLINE);
    // |z| = 1 from 1 to ω, and |z + 1| = 1 from ω to −2
    c.arc((0.0, 0.0), 1.0, 0.0, 2.0 * PI / 3.0, r##"stroke="#000000""##);
    c.arc((-1.0, 0.0), 1.0, PI / 3.0, PI, r##"stroke="#000000""##);
    let (a, b) = dom.free_side();
    c.line((a.to_f64(), 0.0), (b.to_f64(), 0.0), r##"stroke="#c00000" stroke-width="0.04""##);
    c.dot((-0.5, 3f64.sqrt() / 2.0), 0.03, r##"fill="#000000""##);
    let p = &dom.params;
    c.finish(&format!("fundamental domain k={} l={}", p.k, p.l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylinders::decompose;
    use crate::fuchsian::build_domain;
    use crate::numeric::{solve_lambda, BigRational};
    use crate::surface::{build_surface, singular_segments};

    #[test]
    fn domain_figure() {
        let dom = build_domain(&solve_lambda(2, 1).unwrap()).unwrap();
        let svg = render_domain(&dom, &RenderOptions::default());
        assert!(svg.starts_with("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg "));
        assert!(svg.contains(r#"x1="-2.000000""#));
        assert!(svg.contains(r#"x1="1.236068""#));
        assert!(svg.contains("A 1.000000 1.000000"));
        assert_eq!(svg, render_domain(&dom, &RenderOptions::default()));
    }

    #[test]
    fn surface_figures() {
        let p = solve_lambda(2, 1).unwrap();
        let surf = build_surface(&p, 6).unwrap();
        let opts = RenderOptions::default();
        let svg = render_surface(&surf, &opts);
        // c₁ = 1+λ, c₂ = 2
        assert!(svg.contains("1.618034,0.000000"));
        assert!(svg.contains("2.000000,1.000000"));
        assert_eq!(svg, render_surface(&surf, &opts));

        let dec = decompose(&surf, Direction::Horizontal).unwrap();
        let svg = render_cylinders(&surf, &dec, &opts).unwrap();
        assert_eq!(svg.matches("<rect").count(), 6);
        let anti = decompose(&surf, Direction::Antidiagonal).unwrap();
        assert!(render_cylinders(&surf, &anti, &opts).is_err());

        let one = BigRational::from_integer(1.into());
        let v = singular_segments(&surf, &one, 5).unwrap();
        let svg = render_segments(&surf, &p.field().one(), &v, &opts);
        assert_eq!(svg.matches("#1a9850").count(), 10);
    }

    #[test]
    fn negative_zero_is_normalized() {
        assert_eq!(num(-0.0000001), "0.000000");
        assert_eq!(num(-1.5), "-1.500000");
    }
}
