//! Artifact writers. CSV is the contract: fixed columns, fixed float
//! formatting, rows in deterministic order. The JSON sidecar records how a
//! run was produced; SVG plots are derived presentation.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use gffx_core::Result;

use crate::experiments::ExperimentResult;

/// A CSV cell: empty, text, integer-exact, or float printed as {:.12e}.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Empty,
    Text(String),
    Int(i64),
    Float(f64),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Empty => String::new(),
            Cell::Text(s) => s.clone(),
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.12e}"),
        }
    }
}

pub fn render_csv(columns: &[String], rows: &[Vec<Cell>]) -> String {
    let mut out = String::new();
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(Cell::render).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Write `<name>.csv` and the `<name>_config.json` sidecar; returns the
/// CSV path.
pub fn write_result(result: &ExperimentResult, out_dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(out_dir)?;
    let csv_path = out_dir.join(format!("{}.csv", result.experiment));
    std::fs::write(&csv_path, render_csv(&result.columns, &result.rows))?;
    let sidecar = out_dir.join(format!("{}_config.json", result.experiment));
    std::fs::write(&sidecar, serde_json::to_string_pretty(&result.sidecar())?)?;
    Ok(csv_path)
}

/// Minimal polyline chart of y-series over a shared x grid.
pub fn render_svg(title: &str, xs: &[f64], series: &[(&str, &[f64])]) -> String {
    let (w, h, pad) = (640.0, 400.0, 50.0);
    let x_min = xs.iter().cloned().fold(f64::MAX, f64::min);
    let x_max = xs.iter().cloned().fold(f64::MIN, f64::max);
    let mut y_min = f64::MAX;
    let mut y_max = f64::MIN;
    for (_, ys) in series {
        for &y in *ys {
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    let x_span = (x_max - x_min).max(1e-12);
    let y_span = (y_max - y_min).max(1e-12);
    let to_x = |x: f64| pad + (x - x_min) / x_span * (w - 2.0 * pad);
    let to_y = |y: f64| h - pad - (y - y_min) / y_span * (h - 2.0 * pad);
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
    let mut svg = String::new();
    let _ = write!(
        svg,
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    );
    let _ = write!(
        svg,
        "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{title}</text>\n",
        w / 2.0
    );
    let _ = write!(
        svg,
        "<line x1=\"{pad}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n<line x1=\"{pad}\" y1=\"{pad}\" x2=\"{pad}\" y2=\"{}\" stroke=\"black\"/>\n",
        h - pad,
        w - pad,
        h - pad,
        h - pad
    );
    for (i, (name, ys)) in series.iter().enumerate() {
        let pts: Vec<String> = xs
            .iter()
            .zip(*ys)
            .map(|(&x, &y)| format!("{:.2},{:.2}", to_x(x), to_y(y)))
            .collect();
        let color = colors[i % colors.len()];
        let _ = write!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            pts.join(" ")
        );
        let _ = write!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{color}\">{name}</text>\n",
            w - pad + 4.0,
            to_y(*ys.last().unwrap_or(&0.0))
        );
    }
    svg.push_str("</svg>\n");
    svg
}
