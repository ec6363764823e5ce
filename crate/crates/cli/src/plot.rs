//! Self-contained SVG convergence plots with a logarithmic gap axis.

use std::fmt::Write as _;
use std::path::Path;

use crate::bench::BenchmarkOutcome;
use crate::error::{HarnessError, HarnessResult};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// A curve of `(k, value)` points.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
    /// Index into the palette; a bound shares its method's color.
    pub color: usize,
}

/// Realized gaps and dashed bound curves for every run. Runs without known
/// gaps produce warnings instead of series.
pub fn outcome_series(outcome: &BenchmarkOutcome) -> (Vec<Series>, Vec<String>) {
    let mut series = Vec::new();
    let mut warnings = Vec::new();
    for (i, run) in outcome.runs.iter().enumerate() {
        let tag = run.trace.method.as_str();
        let gaps: Vec<(f64, f64)> =
            run.trace.rows.iter().filter_map(|r| r.gap.map(|g| (r.k as f64, g))).collect();
        if gaps.is_empty() {
            warnings.push(format!("{tag}: no known optimum, gap series omitted"));
        } else {
            series.push(Series { label: format!("{tag} gap"), points: gaps, dashed: false, color: i });
        }
        let bound = run.trace.rows.iter().zip(&run.bound).map(|(r, b)| (r.k as f64, *b)).collect();
        series.push(Series { label: format!("{tag} bound"), points: bound, dashed: true, color: i });
    }
    (series, warnings)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the series. Nonpositive or non-finite values are skipped on the
/// log axis.
pub fn render_svg(title: &str, series: &[Series]) -> String {
    let visible = |p: &&(f64, f64)| p.1 > 0.0 && p.1.is_finite();
    let ys: Vec<f64> = series.iter().flat_map(|s| s.points.iter().filter(visible).map(|p| p.1)).collect();
    let k_max = series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).fold(1.0, f64::max);
    let (mut lo, mut hi) = match (ys.iter().copied().reduce(f64::min), ys.iter().copied().reduce(f64::max)) {
        (Some(a), Some(b)) => (a.log10().floor(), b.log10().ceil()),
        _ => (-1.0, 0.0),
    };
    if hi <= lo {
        hi = lo + 1.0;
    }
    lo = lo.max(hi - 30.0);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |k: f64| LEFT + if k_max > 1.0 { (k - 1.0) / (k_max - 1.0) * pw } else { 0.0 };
    let sy = |v: f64| TOP + (hi - v.log10().clamp(lo, hi)) / (hi - lo) * ph;

    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#).unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(s, r#"<text x="{}" y="20" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(title)).unwrap();
    let decades = (hi - lo) as i32;
    let stride = (decades / 10).max(1);
    for d in (0..=decades).step_by(stride as usize) {
        let e = lo as i32 + d;
        let y = sy(10f64.powi(e));
        writeln!(s, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##, LEFT + pw).unwrap();
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">1e{e}</text>"#, LEFT - 6.0, y + 4.0).unwrap();
    }
    for i in 0..=4 {
        let k = 1.0 + (k_max - 1.0) * i as f64 / 4.0;
        let x = sx(k);
        writeln!(s, r#"<text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#, TOP + ph + 18.0, k.round()).unwrap();
    }
    writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#).unwrap();
    writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">iteration k</text>"#, LEFT + pw / 2.0, HEIGHT - 15.0).unwrap();
    writeln!(s, r#"<text x="18" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 18 {:.2})">F - F*</text>"#, TOP + ph / 2.0, TOP + ph / 2.0).unwrap();

    for ser in series {
        let pts: Vec<String> =
            ser.points.iter().filter(visible).map(|&(k, v)| format!("{:.2},{:.2}", sx(k), sy(v))).collect();
        if pts.is_empty() {
            continue;
        }
        let dash = if ser.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5"{dash} points="{}"/>"#,
            COLORS[ser.color % COLORS.len()],
            pts.join(" ")
        )
        .unwrap();
    }

    let lx = LEFT + pw - 160.0;
    for (i, ser) in series.iter().enumerate() {
        let y = TOP + 18.0 + 18.0 * i as f64;
        let dash = if ser.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        writeln!(s, r#"<line x1="{lx:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="1.5"{dash}/>"#, lx + 30.0, COLORS[ser.color % COLORS.len()]).unwrap();
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{}</text>"#, lx + 38.0, y + 4.0, escape(&ser.label)).unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// Writes the plot of `series` to `path`.
pub fn emit_plot(title: &str, series: &[Series], path: &Path) -> HarnessResult<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    std::fs::write(path, render_svg(title, series)).map_err(|e| HarnessError::io(path, e))
}
