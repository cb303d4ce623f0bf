//! SVG figures for grid drawings and crossing certificates.
//!
//! Shared edges are black, `Private1` blue and `Private2` red; pumpkin edges
//! are drawn thicker. Math coordinates are flipped to screen coordinates
//! only here. Output is a pure function of the input.

use std::fmt::Write as _;

use thiserror::Error;

use crate::cert::{planarize_labeled, CertError, CrossingStructure};
use crate::drawing::{verify_drawing, DrawingError, GridDrawing};
use crate::graph::{EdgeLabel, SefeInstance, VertexId};

/// Pixels per grid unit.
const UNIT: f64 = 6.0;
const MARGIN: f64 = 12.0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SvgError {
    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),
    #[error(transparent)]
    Drawing(#[from] DrawingError),
    #[error(transparent)]
    Cert(#[from] CertError),
}

fn is_pumpkin_tag(tag: Option<&str>) -> bool {
    tag.is_some_and(|t| ["pole:", "rim:", "spoke_s:", "spoke_t:", "handle:"].iter().any(|p| t.starts_with(p)))
}

fn is_pumpkin_edge(inst: &SefeInstance, u: VertexId, v: VertexId) -> bool {
    is_pumpkin_tag(inst.tag(u)) && is_pumpkin_tag(inst.tag(v))
}

fn color(label: EdgeLabel) -> &'static str {
    match label {
        EdgeLabel::Shared => "black",
        EdgeLabel::Private1 => "blue",
        EdgeLabel::Private2 => "red",
    }
}

fn header(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
}

/// Maps math coordinates into the picture, y pointing down.
struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = (f64, f64)>, scale: f64) -> (Frame, f64, f64) {
        let (mut min_x, mut max_x, mut min_y, mut max_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for (x, y) in points {
            min_x = min_x.min(x);
            max_x = max_x.max(x);
            min_y = min_y.min(y);
            max_y = max_y.max(y);
        }
        let width = (max_x - min_x) * scale + 2.0 * MARGIN;
        let height = (max_y - min_y) * scale + 2.0 * MARGIN;
        (Frame { min_x, max_y, scale }, width, height)
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (MARGIN + (x - self.min_x) * self.scale, MARGIN + (self.max_y - y) * self.scale)
    }
}

fn empty_svg() -> String {
    let mut out = String::new();
    header(&mut out, 2.0 * MARGIN, 2.0 * MARGIN);
    out.push_str("</svg>\n");
    out
}

fn line(out: &mut String, a: (f64, f64), b: (f64, f64), label: EdgeLabel, thick: bool) {
    let width = if thick { 2.5 } else { 1.0 };
    let _ = writeln!(
        out,
        r#"<line class="edge {}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="{}"/>"#,
        label.as_str(),
        a.0,
        a.1,
        b.0,
        b.1,
        color(label),
        width
    );
}

fn crossing_marker(out: &mut String, p: (f64, f64)) {
    let _ = writeln!(out, r#"<circle class="crossing" cx="{:.2}" cy="{:.2}" r="2" fill="none" stroke="green"/>"#, p.0, p.1);
}

fn vertex_dot(out: &mut String, p: (f64, f64)) {
    let _ = writeln!(out, r#"<circle class="vertex" cx="{:.2}" cy="{:.2}" r="1.5" fill="black"/>"#, p.0, p.1);
}

/// Renders a grid drawing. `stretch` multiplies y coordinates only and is
/// applied after verification.
pub fn drawing_svg(inst: &SefeInstance, d: &GridDrawing, stretch: u32) -> Result<String, SvgError> {
    if stretch == 0 {
        return Err(SvgError::UnsupportedMode("stretch must be at least 1".into()));
    }
    if inst.vertex_count() == 0 {
        return Ok(empty_svg());
    }
    let report = verify_drawing(inst, d)?;
    let s = stretch as f64;
    let pos = |v: VertexId| {
        let p = d.get(v).expect("verified drawing maps every vertex");
        (p.x as f64, p.y as f64 * s)
    };
    let (frame, width, height) = Frame::fit(inst.vertices().map(pos), UNIT);

    let mut out = String::new();
    header(&mut out, width, height);
    for e in inst.edges() {
        let thick = e.label == EdgeLabel::Shared && is_pumpkin_edge(inst, e.u, e.v);
        line(&mut out, frame.map(pos(e.u)), frame.map(pos(e.v)), e.label, thick);
    }
    for v in inst.vertices() {
        vertex_dot(&mut out, frame.map(pos(v)));
    }
    for c in &report.crossings {
        let (x, y) = c.point.to_f64();
        crossing_marker(&mut out, frame.map((x, y * s)));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Deterministic Fruchterman-Reingold layout started from a circle.
fn force_layout(n: usize, edges: &[(usize, usize)]) -> Vec<(f64, f64)> {
    let area = (n.max(1) as f64) * 100.0;
    let k = (area / n.max(1) as f64).sqrt();
    let radius = area.sqrt() / 2.0;
    let mut pos: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / n as f64;
            (radius * a.cos(), radius * a.sin())
        })
        .collect();
    let iterations = 200;
    let mut temp = radius / 4.0;
    for _ in 0..iterations {
        let mut disp = vec![(0.0f64, 0.0f64); n];
        for i in 0..n {
            for j in i + 1..n {
                let (dx, dy) = (pos[i].0 - pos[j].0, pos[i].1 - pos[j].1);
                let dist = (dx * dx + dy * dy).sqrt().max(0.01);
                let f = k * k / dist;
                disp[i].0 += dx / dist * f;
                disp[i].1 += dy / dist * f;
                disp[j].0 -= dx / dist * f;
                disp[j].1 -= dy / dist * f;
            }
        }
        for &(u, v) in edges {
            if u == v {
                continue;
            }
            let (dx, dy) = (pos[u].0 - pos[v].0, pos[u].1 - pos[v].1);
            let dist = (dx * dx + dy * dy).sqrt().max(0.01);
            let f = dist * dist / k;
            disp[u].0 -= dx / dist * f;
            disp[u].1 -= dy / dist * f;
            disp[v].0 += dx / dist * f;
            disp[v].1 += dy / dist * f;
        }
        for i in 0..n {
            let len = (disp[i].0 * disp[i].0 + disp[i].1 * disp[i].1).sqrt();
            if len > 0.0 {
                let step = len.min(temp);
                pos[i].0 += disp[i].0 / len * step;
                pos[i].1 += disp[i].1 / len * step;
            }
        }
        temp *= 0.97;
    }
    pos
}

/// Schematic of the planarized certificate; dummy vertices are drawn as
/// crossing markers. The layout is not a verified drawing.
pub fn certificate_svg(inst: &SefeInstance, cs: &CrossingStructure, stretch: u32) -> Result<String, SvgError> {
    if stretch == 0 {
        return Err(SvgError::UnsupportedMode("stretch must be at least 1".into()));
    }
    if inst.vertex_count() == 0 {
        return Ok(empty_svg());
    }
    let (g, labels) = planarize_labeled(inst, cs)?;
    let s = stretch as f64;
    let pos: Vec<(f64, f64)> = force_layout(g.vertex_count(), g.edges()).into_iter().map(|(x, y)| (x, y * s)).collect();
    let (frame, width, height) = Frame::fit(pos.iter().copied(), 1.0);

    let mut out = String::new();
    header(&mut out, width, height);
    let n = inst.vertex_count();
    for (&(u, v), &label) in g.edges().iter().zip(&labels) {
        let thick = label == EdgeLabel::Shared
            && u < n
            && v < n
            && is_pumpkin_edge(inst, VertexId::from(u), VertexId::from(v));
        line(&mut out, frame.map(pos[u]), frame.map(pos[v]), label, thick);
    }
    for p in &pos[..n] {
        vertex_dot(&mut out, frame.map(*p));
    }
    for p in &pos[n..] {
        crossing_marker(&mut out, frame.map(*p));
    }
    out.push_str("</svg>\n");
    Ok(out)
}
