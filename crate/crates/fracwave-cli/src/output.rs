//! File outputs: versioned CSV tables, JSON documents, line plots and raw
//! field dumps.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use fracwave::field::SampleBatch;
use serde::Serialize;
use serde_json::json;

pub const CSV_SCHEMA: u32 = 1;

fn create_parent(path: &Path) -> io::Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir),
        _ => Ok(()),
    }
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> io::Result<()> {
    create_parent(path)?;
    fs::write(path, bytes)
}

/// Pretty JSON with a trailing newline.
pub fn write_json(path: &Path, value: &impl Serialize) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    text.push('\n');
    write_bytes(path, text.as_bytes())
}

/// A CSV table whose first line is `# schema=1`.
pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self { text: format!("# schema={CSV_SCHEMA}\n{}\n", header.join(",")), columns: header.len() }
    }

    pub fn row(&mut self, fields: &[String]) {
        debug_assert_eq!(fields.len(), self.columns);
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        write_bytes(path, self.text.as_bytes())
    }
}

/// Splits a CSV produced by [`Csv`] into header and data lines, rejecting
/// a missing or unknown schema line.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>), String> {
    let mut lines = text.lines();
    let first = lines.next().ok_or("empty file")?;
    let version = first.strip_prefix("# schema=").ok_or_else(|| format!("missing schema line, got `{first}`"))?;
    if version.trim() != CSV_SCHEMA.to_string() {
        return Err(format!("unsupported schema version {version}"));
    }
    let header = lines.next().ok_or("missing header")?.split(',').map(String::from).collect::<Vec<_>>();
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    if let Some(bad) = rows.iter().position(|r| r.len() != header.len()) {
        return Err(format!("data line {} has {} fields, expected {}", bad + 1, rows[bad].len(), header.len()));
    }
    Ok((header, rows))
}

/// Polyline plot with axes and range labels.
pub fn svg_line_plot(xs: &[f64], ys: &[f64], x_label: &str, y_label: &str) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const M: f64 = 50.0;
    let range = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) }
    };
    let (x0, x1) = range(xs);
    let (y0, y1) = range(ys);
    let px = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let py = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);
    let mut points = String::new();
    for (&x, &y) in xs.iter().zip(ys) {
        let _ = write!(points, "{:.2},{:.2} ", px(x), py(y));
    }
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{M},{} V{} H{}" fill="none" stroke="black"/>"#,
        M,
        H - M,
        W - M
    );
    let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1"/>"#, points.trim_end());
    let text = |s: &mut String, x: f64, y: f64, anchor: &str, label: &str| {
        let _ = writeln!(s, r#"<text x="{x:.1}" y="{y:.1}" font-size="12" text-anchor="{anchor}">{label}</text>"#);
    };
    text(&mut s, M, H - M + 16.0, "middle", &format!("{x0}"));
    text(&mut s, W - M, H - M + 16.0, "middle", &format!("{x1}"));
    text(&mut s, M - 4.0, H - M, "end", &format!("{y0:.4}"));
    text(&mut s, M - 4.0, M + 4.0, "end", &format!("{y1:.4}"));
    text(&mut s, W / 2.0, H - 10.0, "middle", x_label);
    text(&mut s, 14.0, H / 2.0, "middle", y_label);
    s.push_str("</svg>\n");
    s
}

/// Writes `cell_NN.f64` (little-endian doubles, one realization after
/// another, each in time-major point order) and `cell_NN.json` describing
/// the grid. Returns the binary path.
pub fn dump_batch(dir: &Path, cell: usize, batch: &SampleBatch) -> io::Result<PathBuf> {
    let bin = dir.join(format!("cell_{cell:02}.f64"));
    write_bytes(&bin, &batch.to_le_bytes())?;
    let grid = &batch.grid;
    let sidecar = json!({
        "cell": cell,
        "data": bin.file_name().and_then(|n| n.to_str()),
        "dtype": "f64le",
        "shape": [batch.n_reps, grid.nt(), grid.nx()],
        "order": "replicate, time, space",
        "seed": batch.seed,
        "t_values": grid.t_values(),
        "x0": grid.x0(),
        "dx": grid.dx(),
        "nx": grid.nx(),
    });
    write_json(&dir.join(format!("cell_{cell:02}.json")), &sidecar)?;
    Ok(bin)
}
