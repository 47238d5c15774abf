//! Gold-versus-prediction scatter plot as CSV plus SVG.

use strel::pipeline::emit_scatter;

fn main() -> strel::Result<()> {
    let dir = tempfile::tempdir().expect("temp dir");
    let gold: Vec<f64> = (0..50).map(|i| i as f64 / 49.0).collect();
    let pred: Vec<f64> = gold
        .iter()
        .enumerate()
        .map(|(i, g)| (g + 0.1 * ((i * 7 % 11) as f64 / 11.0 - 0.5)).clamp(0.0, 1.0))
        .collect();
    let svg = emit_scatter(&gold, &pred, dir.path().join("scatter.csv"))?;
    let text = std::fs::read_to_string(&svg).expect("svg");
    println!(
        "{} ({} bytes, {} points)",
        svg.file_name().unwrap().to_string_lossy(),
        text.len(),
        text.matches("<circle").count()
    );
    Ok(())
}
