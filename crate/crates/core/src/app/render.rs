//! SVG rendering of drawings: dots joined by straight segments.
//!
//! The unit square maps onto a `size_px` square canvas with the y axis
//! flipped, so `(0, 0)` lands in the lower-left corner.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Drawing, Graph, Point};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RenderOptions {
    pub size_px: f64,
    pub margin_px: f64,
    pub node_radius: f64,
    pub edge_width: f64,
    pub node_color: String,
    pub edge_color: String,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            size_px: 400.0,
            margin_px: 10.0,
            node_radius: 3.0,
            edge_width: 1.0,
            node_color: "#1f2937".into(),
            edge_color: "#9ca3af".into(),
        }
    }
}

impl RenderOptions {
    /// Canvas position of a unit-square point.
    pub fn project(&self, p: Point) -> (f64, f64) {
        let inner = self.size_px - 2.0 * self.margin_px;
        (self.margin_px + p.x * inner, self.margin_px + (1.0 - p.y) * inner)
    }
}

pub fn render_svg(d: &Drawing, g: &Graph, opts: &RenderOptions) -> Result<String> {
    d.check_for(g)?;
    let total = opts.size_px;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" viewBox="0 0 {total} {total}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<g stroke="{}" stroke-width="{}">"#,
        opts.edge_color, opts.edge_width
    );
    for &(a, b) in g.edges() {
        let (x1, y1) = opts.project(d.coords()[a]);
        let (x2, y2) = opts.project(d.coords()[b]);
        let _ = writeln!(
            out,
            r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g fill="{}">"#, opts.node_color);
    for &p in d.coords() {
        let (cx, cy) = opts.project(p);
        let _ = writeln!(
            out,
            r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{}"/>"#,
            opts.node_radius
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn render(d: &Drawing, g: &Graph, path: &Path, opts: &RenderOptions) -> Result<()> {
    let svg = render_svg(d, g, opts)?;
    fs::write(path, svg).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_element_counts() {
        let g = Graph::complete(3).unwrap();
        let d = Drawing::from_pairs(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]).unwrap();
        let svg = render_svg(&d, &g, &RenderOptions::default()).unwrap();
        assert_eq!(svg.matches("<circle").count(), 3);
        assert_eq!(svg.matches("<line").count(), 3);
        assert!(svg.find("<line").unwrap() < svg.find("<circle").unwrap());
    }

    #[test]
    fn origin_is_lower_left() {
        let opts = RenderOptions::default();
        let (x, y) = opts.project(Point::new(0.0, 0.0));
        assert_eq!(x, opts.margin_px);
        assert_eq!(y, opts.size_px - opts.margin_px);
    }
}
