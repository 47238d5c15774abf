use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

const SIZE: f64 = 400.0;
const MARGIN: f64 = 40.0;

fn to_svg_xy(gold: f64, pred: f64) -> (f64, f64) {
    let span = SIZE - 2.0 * MARGIN;
    (MARGIN + gold * span, SIZE - MARGIN - pred * span)
}

/// Self-contained SVG: gold on x, prediction on y, dashed `y = x` line.
pub fn scatter_svg(gold: &[f64], pred: &[f64]) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#
    );
    let (x0, y0) = to_svg_xy(0.0, 0.0);
    let (x1, y1) = to_svg_xy(1.0, 1.0);
    let _ = writeln!(
        svg,
        r#"<rect x="{x0}" y="{y1}" width="{w}" height="{w}" fill="none" stroke="black"/>"#,
        w = x1 - x0
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" stroke="grey" stroke-dasharray="4 4"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{cx}" y="{ty}" text-anchor="middle" font-size="12">gold</text>"#,
        cx = SIZE / 2.0,
        ty = SIZE - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="12" y="{cy}" text-anchor="middle" font-size="12" transform="rotate(-90 12 {cy})">predicted</text>"#,
        cy = SIZE / 2.0
    );
    for (&g, &p) in gold.iter().zip(pred) {
        let (cx, cy) = to_svg_xy(g.clamp(0.0, 1.0), p.clamp(0.0, 1.0));
        let _ = writeln!(
            svg,
            r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="2" fill="steelblue" fill-opacity="0.6"/>"#
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Write `gold,pred` rows to `path` and an SVG scatter next to it.
///
/// Returns the SVG path.
pub fn emit_scatter(gold: &[f64], pred: &[f64], path: impl AsRef<Path>) -> Result<PathBuf> {
    if gold.len() != pred.len() {
        return Err(Error::Alignment {
            expected: gold.len(),
            actual: pred.len(),
        });
    }
    let path = path.as_ref();
    let mut wtr = csv::Writer::from_path(path)?;
    wtr.write_record(["gold", "pred"])?;
    for (g, p) in gold.iter().zip(pred) {
        wtr.write_record([g.to_string(), p.to_string()])?;
    }
    wtr.flush().map_err(|e| Error::io(path, e))?;
    let svg_path = path.with_extension("svg");
    std::fs::write(&svg_path, scatter_svg(gold, pred)).map_err(|e| Error::io(&svg_path, e))?;
    Ok(svg_path)
}
