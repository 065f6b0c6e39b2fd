//! Deterministic SVG rendering of sweep results.
//!
//! Line plots put the last swept column on the x axis and draw one curve per
//! combination of the remaining swept columns. Heatmaps take the last two
//! swept columns as x and y. Every file embeds the SHA-256 of the CSV text
//! of the data it shows.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::csv::with_suffix;
use super::{
    format_number, to_csv_string, write_file, PlotKind, SpecError, SweepError, SweepResult,
};

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Viridis anchors, low to high.
const RAMP: [(f64, f64, f64); 5] = [
    (68.0, 1.0, 84.0),
    (59.0, 82.0, 139.0),
    (33.0, 145.0, 140.0),
    (94.0, 201.0, 98.0),
    (253.0, 231.0, 37.0),
];

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, v: f64) -> f64 {
        LEFT + (v - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, v: f64) -> f64 {
        HEIGHT - BOTTOM - (v - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

type Series = (Vec<f64>, Vec<(f64, f64)>);

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if hi - lo > 1e-12 * hi.abs().max(1.0) {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

/// Tick positions at 1, 2 or 5 times a power of ten.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn label(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn axes(out: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        out,
        r##"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="#000"/>"##,
        x1 - x0,
        y0 - y1
    );
    for t in ticks(f.x.0, f.x.1) {
        let x = f.px(t);
        let _ = writeln!(
            out,
            r##"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{:.2}" stroke="#000"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            y0 + 5.0,
            y0 + 20.0,
            label(t)
        );
    }
    for t in ticks(f.y.0, f.y.1) {
        let y = f.py(t);
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="#000"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            x0 - 5.0,
            x0 - 8.0,
            y + 4.0,
            label(t)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0,
        escape(xlabel)
    );
    let _ = writeln!(
        out,
        r#"<text transform="translate(20,{:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
        (y0 + y1) / 2.0,
        escape(ylabel)
    );
}

fn color(t: f64) -> String {
    let t = t.clamp(0.0, 1.0) * (RAMP.len() - 1) as f64;
    let i = (t.floor() as usize).min(RAMP.len() - 2);
    let w = t - i as f64;
    let (a, b) = (RAMP[i], RAMP[i + 1]);
    let mix = |p: f64, q: f64| (p + (q - p) * w).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(a.0, b.0),
        mix(a.1, b.1),
        mix(a.2, b.2)
    )
}

fn swept_count(res: &SweepResult) -> usize {
    res.metadata
        .iter()
        .filter(|(k, _)| k.starts_with("grid."))
        .count()
}

fn use_heatmap(res: &SweepResult, kind: PlotKind) -> Result<bool, SweepError> {
    let swept = swept_count(res);
    match kind {
        PlotKind::Lines => Ok(false),
        PlotKind::Heatmap if swept == 2 => Ok(true),
        PlotKind::Heatmap => Err(SpecError::BadValue {
            key: "plot".into(),
            reason: format!("heatmap needs exactly two swept parameters, got {swept}"),
        }
        .into()),
        PlotKind::Auto => Ok(swept == 2
            && (0..2)
                .all(|c| distinct(&res.rows.iter().map(|r| r[c]).collect::<Vec<_>>()).len() >= 6)),
    }
}

fn distinct(values: &[f64]) -> Vec<f64> {
    let mut seen: Vec<f64> = Vec::new();
    for v in values {
        if !seen.contains(v) {
            seen.push(*v);
        }
    }
    seen
}

fn lines(out: &mut String, res: &SweepResult, metric: usize, swept: usize) {
    let xcol = swept - 1;
    let frame = Frame {
        x: span(res.rows.iter().map(|r| r[xcol])),
        y: span(res.rows.iter().map(|r| r[metric])),
    };
    axes(out, &frame, &res.columns[xcol], &res.columns[metric]);
    // group rows by the leading swept columns, preserving first appearance
    let mut series: Vec<Series> = Vec::new();
    for row in &res.rows {
        let key = row[..xcol].to_vec();
        match series.iter_mut().find(|(k, _)| *k == key) {
            Some((_, pts)) => pts.push((row[xcol], row[metric])),
            None => series.push((key, vec![(row[xcol], row[metric])])),
        }
    }
    for (i, (key, pts)) in series.iter().enumerate() {
        let stroke = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", frame.px(*x), frame.py(*y)))
            .collect();
        let name = if key.is_empty() {
            res.columns[metric].clone()
        } else {
            key.iter()
                .zip(&res.columns)
                .map(|(v, c)| format!("{c}={}", format_number(*v)))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let _ = writeln!(
            out,
            r#"<polyline class="series" fill="none" stroke="{stroke}" stroke-width="1.8" points="{}"><title>{}</title></polyline>"#,
            path.join(" "),
            escape(&name)
        );
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{stroke}" stroke-width="3"/><text class="legend" x="{}" y="{}">{}</text>"#,
            lx + 25.0,
            lx + 32.0,
            ly + 4.0,
            escape(&name)
        );
    }
}

fn heatmap(out: &mut String, res: &SweepResult, metric: usize) {
    let xs = distinct(&res.rows.iter().map(|r| r[1]).collect::<Vec<_>>());
    let ys = distinct(&res.rows.iter().map(|r| r[0]).collect::<Vec<_>>());
    let frame = Frame {
        x: span(xs.iter().copied()),
        y: span(ys.iter().copied()),
    };
    let (zlo, zhi) = span(res.rows.iter().map(|r| r[metric]));
    let half = |v: &[f64], i: usize, scale: &dyn Fn(f64) -> f64| -> (f64, f64) {
        let lo = if i == 0 {
            v[0]
        } else {
            0.5 * (v[i - 1] + v[i])
        };
        let hi = if i + 1 == v.len() {
            v[i]
        } else {
            0.5 * (v[i] + v[i + 1])
        };
        (scale(lo), scale(hi))
    };
    for row in &res.rows {
        let xi = xs.iter().position(|v| *v == row[1]).expect("x present");
        let yi = ys.iter().position(|v| *v == row[0]).expect("y present");
        let (x0, x1) = half(&xs, xi, &|v| frame.px(v));
        let (ya, yb) = half(&ys, yi, &|v| frame.py(v));
        let (y0, y1) = (ya.min(yb), ya.max(yb));
        let _ = writeln!(
            out,
            r#"<rect class="cell" x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
            (x1 - x0).max(0.5),
            (y1 - y0).max(0.5),
            color((row[metric] - zlo) / (zhi - zlo))
        );
    }
    axes(out, &frame, &res.columns[1], &res.columns[0]);
    let bx = WIDTH - RIGHT + 30.0;
    let steps = 50;
    let bar_h = HEIGHT - TOP - BOTTOM;
    for k in 0..steps {
        let t = k as f64 / (steps - 1) as f64;
        let y = HEIGHT - BOTTOM - (k + 1) as f64 * bar_h / steps as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{bx}" y="{y:.2}" width="20" height="{:.2}" fill="{}"/>"#,
            bar_h / steps as f64 + 0.5,
            color(t)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}">{}</text><text x="{}" y="{}">{}</text><text x="{}" y="{}">{}</text>"#,
        bx + 25.0,
        HEIGHT - BOTTOM,
        label(zlo),
        bx + 25.0,
        TOP + 10.0,
        label(zhi),
        bx,
        TOP - 10.0,
        escape(&res.columns[metric])
    );
}

/// SVG text for the result's primary metric (named by `metric`).
pub fn to_svg_string(
    res: &SweepResult,
    metric: &str,
    kind: PlotKind,
) -> Result<String, SweepError> {
    if res.rows.is_empty() || res.columns.is_empty() {
        return Err(SweepError::EmptyResult);
    }
    let csv = to_csv_string(res)?;
    let digest = Sha256::digest(csv.as_bytes());
    let checksum: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    let swept = swept_count(res);
    let metric_idx = res
        .columns
        .iter()
        .position(|c| c == metric)
        .ok_or_else(|| SweepError::InvalidResult {
            row: 0,
            reason: format!("no column named {metric}"),
        })?;
    if swept == 0 || swept > metric_idx {
        return Err(SweepError::InvalidResult {
            row: 0,
            reason: "no swept column to plot against".into(),
        });
    }
    let title = res
        .metadata
        .iter()
        .find(|(k, _)| k == "target")
        .map(|(_, v)| v.clone())
        .unwrap_or_default();

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, "<!-- data-sha256:{checksum} -->");
    let _ = writeln!(out, r#"<metadata id="data-sha256">{checksum}</metadata>"#);
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#fff"/>"##);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        escape(&title)
    );
    if use_heatmap(res, kind)? {
        heatmap(&mut out, res, metric_idx);
    } else {
        lines(&mut out, res, metric_idx, swept);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Writes `<prefix>.svg`; nothing is written on error.
pub fn emit_plot(
    res: &SweepResult,
    metric: &str,
    kind: PlotKind,
    prefix: &Path,
) -> Result<PathBuf, SweepError> {
    let svg = to_svg_string(res, metric, kind)?;
    let path = with_suffix(prefix, "svg");
    write_file(&path, svg.as_bytes())?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{load_spec, run_sweep, RunOptions};

    fn result(name: &str) -> (SweepResult, PlotKind, &'static str) {
        let spec = load_spec(name).unwrap();
        let res = run_sweep(&spec, &RunOptions::default()).unwrap();
        (res, spec.plot, spec.target.primary_metric())
    }

    #[test]
    fn fig7_has_one_curve_per_pair() {
        let (res, kind, metric) = result("fig7");
        let svg = to_svg_string(&res, metric, kind).unwrap();
        let betas = crate::sweep::plot::distinct(&res.column("beta").unwrap()).len();
        let nfs = crate::sweep::plot::distinct(&res.column("n_f").unwrap()).len();
        assert_eq!(svg.matches("class=\"series\"").count(), betas * nfs);
        assert_eq!(svg.matches("class=\"legend\"").count(), betas * nfs);
        assert!(svg.contains("n_f=100.0, beta=-1.0"));
    }

    #[test]
    fn fig5_is_heatmap() {
        let (res, kind, metric) = result("fig5");
        let svg = to_svg_string(&res, metric, kind).unwrap();
        assert_eq!(svg.matches("class=\"cell\"").count(), res.rows.len());
        assert!(!svg.contains("class=\"series\""));
    }

    #[test]
    fn checksum_tracks_data() {
        let (res, kind, metric) = result("fig9");
        let a = to_svg_string(&res, metric, kind).unwrap();
        assert_eq!(a, to_svg_string(&res, metric, kind).unwrap());
        let mut changed = res.clone();
        changed.rows[0][3] += 1e-9;
        let b = to_svg_string(&changed, metric, kind).unwrap();
        let sum = |s: &str| s.lines().nth(1).unwrap().to_string();
        assert_ne!(sum(&a), sum(&b));
    }

    #[test]
    fn empty_result_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let empty = SweepResult {
            columns: vec!["x".into(), "y".into()],
            rows: vec![],
            metadata: vec![("grid.x".into(), "1".into())],
        };
        let prefix = dir.path().join("empty");
        assert!(matches!(
            emit_plot(&empty, "y", PlotKind::Auto, &prefix),
            Err(SweepError::EmptyResult)
        ));
        assert!(!dir.path().join("empty.svg").exists());
    }

    #[test]
    fn nice_ticks() {
        assert_eq!(
            ticks(0.0, 1.0),
            vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]
        );
        assert_eq!(label(0.6000000000000001), "0.6");
        assert_eq!(ticks(0.0, 10.0).len(), 6);
    }
}
