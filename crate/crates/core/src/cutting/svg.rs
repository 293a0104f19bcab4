//! SVG rendering of a cutting.

use std::fmt::Write as _;
use std::path::Path;

use super::Cutting;
use crate::error::Result;

const SIZE: f64 = 800.0;

pub fn write_svg(cut: &Cutting, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render(cut))?;
    Ok(())
}

fn render(cut: &Cutting) -> String {
    let vp = cut.viewport;
    let scale = SIZE / vp.width().max(vp.height());
    let map = |x: f64, y: f64| ((x - vp.xmin) * scale, (vp.ymax - y) * scale);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}">"#,
        vp.width() * scale,
        vp.height() * scale
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white" stroke="black"/>"#);
    for tc in cut.curves() {
        let sampled = cut.is_sampled(tc.id);
        let (color, width) = if sampled { ("black", 1.5) } else { ("#bbb", 0.5) };
        for comp in &tc.trace.components {
            let stride = (comp.samples.len() / 2000).max(1);
            let pts: Vec<String> = comp
                .samples
                .iter()
                .step_by(stride)
                .chain(comp.samples.last())
                .map(|s| {
                    let (u, v) = map(s.x, s.y);
                    format!("{u:.2},{v:.2}")
                })
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{color}" stroke-width="{width}" points="{}"/>"#,
                pts.join(" ")
            );
        }
    }
    for (rays, color) in [(&cut.rays, "red"), (&cut.walls, "blue")] {
        for r in rays.iter() {
            let (u0, v0) = map(r.x, r.y_from);
            let (u1, v1) = map(r.x, r.y_to);
            let _ = writeln!(
                out,
                r#"<line x1="{u0:.2}" y1="{v0:.2}" x2="{u1:.2}" y2="{v1:.2}" stroke="{color}" stroke-width="0.8"/>"#
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
