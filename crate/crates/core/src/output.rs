//! CSV, summary JSON and SVG writers.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::run::{ComparisonSummary, PathRecord, CSV_HEADER};

/// 12 significant digits.
fn cell(v: f64) -> String {
    format!("{v:.11e}")
}

pub fn to_csv(record: &PathRecord) -> String {
    let mut out = String::with_capacity(record.len() * 15 * 20);
    out.push_str(CSV_HEADER);
    out.push('\n');
    let columns = record.columns();
    for i in 0..record.len() {
        let row: Vec<String> = columns
            .iter()
            .map(|c| c.get(i).copied().map(cell).unwrap_or_default())
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Reads a CSV produced by [`to_csv`]. Empty cells leave a column empty.
pub fn from_csv(text: &str) -> Result<PathRecord> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Csv("empty file".into()))?;
    if header.trim() != CSV_HEADER {
        return Err(Error::Csv(format!("unexpected header `{header}`")));
    }
    let mut record = PathRecord::default();
    for (row, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 15 {
            return Err(Error::Csv(format!("row {} has {} cells", row + 2, cells.len())));
        }
        for (column, c) in record.columns_mut().into_iter().zip(cells) {
            let c = c.trim();
            if c.is_empty() {
                continue;
            }
            let v = c
                .parse::<f64>()
                .map_err(|_| Error::Csv(format!("row {}: `{c}` is not a number", row + 2)))?;
            column.push(v);
        }
    }
    let n = record.t.len();
    for column in record.columns() {
        if !column.is_empty() && column.len() != n {
            return Err(Error::Csv("ragged columns".into()));
        }
    }
    Ok(record)
}

pub fn summary_json(summary: &ComparisonSummary) -> Result<String> {
    Ok(serde_json::to_string_pretty(summary)?)
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;

struct Series<'a> {
    label: &'a str,
    values: &'a [f64],
    color: &'a str,
    dashed: bool,
}

/// `q(t)` for the three families: classical dashed green, semiclassical
/// red, quantum blue (omitted when absent).
pub fn to_svg(record: &PathRecord) -> String {
    let mut series = vec![
        Series {
            label: "classical",
            values: &record.q_c,
            color: "#2a9d2a",
            dashed: true,
        },
        Series {
            label: "semiclassical",
            values: &record.q_sc,
            color: "#d62728",
            dashed: false,
        },
    ];
    if record.has_quantum() {
        series.push(Series {
            label: "quantum",
            values: &record.q_qm,
            color: "#1f5fd6",
            dashed: false,
        });
    }

    let (t0, t1) = match (record.t.first(), record.t.last()) {
        (Some(&a), Some(&b)) if b > a => (a, b),
        _ => (0.0, 1.0),
    };
    let (mut lo, mut hi) = series
        .iter()
        .flat_map(|s| s.values.iter().copied())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !(lo.is_finite() && hi.is_finite()) {
        (lo, hi) = (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        lo -= 0.5;
        hi += 0.5;
    }
    let pad = 0.05 * (hi - lo);
    let (lo, hi) = (lo - pad, hi + pad);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |t: f64| MARGIN_LEFT + (t - t0) / (t1 - t0) * plot_w;
    let sy = |q: f64| MARGIN_TOP + (hi - q) / (hi - lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(&record.name)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for k in 0..=5 {
        let f = k as f64 / 5.0;
        let t = t0 + f * (t1 - t0);
        let q = lo + f * (hi - lo);
        let (x, y) = (sx(t), sy(q));
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 5.0,
            MARGIN_TOP + plot_h + 20.0,
            tick(t)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN_LEFT}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 5.0,
            MARGIN_LEFT - 8.0,
            y + 4.0,
            tick(q)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">t</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">q</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    for (k, s) in series.iter().enumerate() {
        let points: Vec<String> = record
            .t
            .iter()
            .zip(s.values)
            .map(|(&t, &q)| format!("{:.2},{:.2}", sx(t), sy(q)))
            .collect();
        let dash = if s.dashed { r#" stroke-dasharray="6,4""# } else { "" };
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="2"{dash} points="{}"/>"#,
            s.color,
            points.join(" ")
        );
        let ly = MARGIN_TOP + 15.0 + 18.0 * k as f64;
        let lx = MARGIN_LEFT + plot_w - 150.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{}" stroke-width="2"{dash}/><text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 30.0,
            s.color,
            lx + 36.0,
            ly + 4.0,
            s.label
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut os = prefix.as_os_str().to_owned();
    os.push(suffix);
    PathBuf::from(os)
}

/// Writes `<prefix>.csv`, `<prefix>.svg` and, when a summary is given,
/// `<prefix>.summary.json`. Returns the paths written.
pub fn emit(
    record: &PathRecord,
    summary: Option<&ComparisonSummary>,
    prefix: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    let prefix = prefix.as_ref();
    let mut written = Vec::new();
    let csv = with_suffix(prefix, ".csv");
    std::fs::write(&csv, to_csv(record))?;
    written.push(csv);
    if let Some(summary) = summary {
        let json = with_suffix(prefix, ".summary.json");
        std::fs::write(&json, summary_json(summary)?)?;
        written.push(json);
    }
    let svg = with_suffix(prefix, ".svg");
    std::fs::write(&svg, to_svg(record))?;
    written.push(svg);
    Ok(written)
}
