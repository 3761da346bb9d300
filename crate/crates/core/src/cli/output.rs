//! CSV, JSON and SVG renderers. All output is a pure function of the records, so identical
//! sweeps produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{ResonanceError, Result};
use crate::expansion::Branch;
use crate::observables::{RecordRow, ResonanceRecord};

use super::commands::{CompareReport, SolveReport};
use super::config::{OutputFormat, SweepConfig};

pub const CSV_COLUMNS: [&str; 15] = [
    "model", "n", "branch", "K", "re_w", "im_w", "re_k", "im_k", "re_E", "im_E", "gamma", "residual",
    "re_w_exact", "im_w_exact", "rel_error",
];

/// 17 significant digits: enough to round-trip any f64.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> ResonanceError {
    ResonanceError::Io(e.to_string())
}

pub fn records_to_csv(records: &[ResonanceRecord]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    for r in records.iter().map(RecordRow::from) {
        w.write_record([
            r.model,
            r.n.to_string(),
            r.branch,
            r.order.to_string(),
            fmt_f64(r.re_w),
            fmt_f64(r.im_w),
            fmt_f64(r.re_k),
            fmt_f64(r.im_k),
            fmt_f64(r.re_energy),
            fmt_f64(r.im_energy),
            fmt_f64(r.gamma),
            fmt_f64(r.residual),
            fmt_opt(r.re_w_exact),
            fmt_opt(r.im_w_exact),
            fmt_opt(r.rel_error),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| ResonanceError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| ResonanceError::Io(e.to_string()))
}

pub fn parse_csv_rows(text: &str) -> Result<Vec<RecordRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<Vec<RecordRow>, _>>()
        .map_err(csv_err)
}

pub fn records_to_json(records: &[ResonanceRecord]) -> Result<String> {
    let rows: Vec<RecordRow> = records.iter().map(RecordRow::from).collect();
    let mut s = serde_json::to_string_pretty(&rows).map_err(|e| ResonanceError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn parse_json_rows(text: &str) -> Result<Vec<RecordRow>> {
    serde_json::from_str(text).map_err(|e| ResonanceError::Io(e.to_string()))
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 40.0;
const TOP: f64 = 60.0;
const BOTTOM: f64 = 70.0;
const TICKS: usize = 5;

/// Scatter of `(Re k, Im k)` in the fourth quadrant: `Im k = 0` along the top edge and more
/// negative `Im k` further down the page. Circles mark the plus branch, crosses the minus
/// branch, dots the single-valued models.
pub fn render_pole_svg(records: &[ResonanceRecord], title: &str) -> Result<String> {
    if records.is_empty() {
        return Err(ResonanceError::EmptyPlot);
    }
    let re_max = records.iter().map(|r| r.k.re).fold(f64::NEG_INFINITY, f64::max);
    let re_min = records.iter().map(|r| r.k.re).fold(f64::INFINITY, f64::min);
    let im_min = records.iter().map(|r| r.k.im).fold(f64::INFINITY, f64::min);
    let im_max = records.iter().map(|r| r.k.im).fold(f64::NEG_INFINITY, f64::max);

    let x_lo = re_min.min(0.0);
    let x_hi = nonzero_span(x_lo, re_max * 1.05);
    let y_top = im_max.max(0.0);
    let y_bottom = -nonzero_span(-y_top, -(im_min * 1.1));

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |re: f64| LEFT + (re - x_lo) / (x_hi - x_lo) * plot_w;
    let py = |im: f64| TOP + (y_top - im) / (y_top - y_bottom) * plot_h;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="30" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    // Frame, then ticks along both axes.
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let re = x_lo + f * (x_hi - x_lo);
        let x = px(re);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            TOP + plot_h,
            TOP + plot_h + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            TOP + plot_h + 20.0,
            tick_label(re)
        );
        let im = y_top + f * (y_bottom - y_top);
        let y = py(im);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT:.2}" y2="{y:.2}" stroke="black"/>"#, LEFT - 5.0);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"#,
            LEFT - 8.0,
            y + 4.0,
            tick_label(im)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="14" text-anchor="middle">Re k</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 20.0
    );
    let _ = writeln!(
        s,
        r#"<text x="25" y="{:.2}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 25 {:.2})">Im k</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    let _ = writeln!(s, r#"<g id="poles">"#);
    for r in records {
        let (x, y) = (px(r.k.re), py(r.k.im));
        let _ = writeln!(s, "{}", marker(r.branch, x, y, r.n));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

fn nonzero_span(lo: f64, hi: f64) -> f64 {
    if hi - lo > 1e-12 {
        hi
    } else {
        lo + 1.0
    }
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn marker(branch: Branch, x: f64, y: f64, n: i64) -> String {
    match branch {
        Branch::Plus => format!(
            r#"<circle class="pole plus" data-n="{n}" cx="{x:.2}" cy="{y:.2}" r="4" fill="none" stroke="blue" stroke-width="1.5"/>"#
        ),
        Branch::Minus => format!(
            r#"<path class="pole minus" data-n="{n}" d="M {:.2} {:.2} L {:.2} {:.2} M {:.2} {:.2} L {:.2} {:.2}" stroke="red" stroke-width="1.5"/>"#,
            x - 4.0,
            y - 4.0,
            x + 4.0,
            y + 4.0,
            x - 4.0,
            y + 4.0,
            x + 4.0,
            y - 4.0
        ),
        Branch::None => format!(
            r#"<circle class="pole none" data-n="{n}" cx="{x:.2}" cy="{y:.2}" r="2.5" fill="black"/>"#
        ),
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn compare_to_csv(report: &CompareReport) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    let mut header = vec!["n".to_string(), "re_w_exact".into(), "im_w_exact".into()];
    header.extend((0..=report.k_max).map(|k| format!("rel_error_K{k}")));
    header.push(format!("rel_error_z_order{}", report.fixed_order));
    w.write_record(&header).map_err(csv_err)?;
    for row in &report.rows {
        let mut fields = vec![row.n.to_string(), fmt_f64(row.w_exact.re), fmt_f64(row.w_exact.im)];
        fields.extend(row.expansion_errors.iter().map(|&e| fmt_f64(e)));
        fields.push(fmt_f64(row.fixed_order_error));
        w.write_record(&fields).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| ResonanceError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| ResonanceError::Io(e.to_string()))
}

pub fn compare_to_json(report: &CompareReport) -> Result<String> {
    let rows: Vec<_> = report
        .rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "n": r.n,
                "re_w_exact": r.w_exact.re,
                "im_w_exact": r.w_exact.im,
                "rel_error_by_order": r.expansion_errors,
                "rel_error_fixed_order": r.fixed_order_error,
            })
        })
        .collect();
    let doc = serde_json::json!({ "k_max": report.k_max, "fixed_order": report.fixed_order, "rows": rows });
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| ResonanceError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Human-readable table for stdout, including failed rows.
pub fn solve_table(report: &SolveReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>4} {:>6} {:>2} {:>24} {:>24} {:>12} {:>10} {:>10}",
        "n", "branch", "K", "k (expansion)", "w (exact)", "gamma", "rel_error", "residual"
    );
    let mut rows: Vec<(i64, Branch, String)> = report
        .records
        .iter()
        .map(|r| {
            let k = format!("{:.6}{:+.6}i", r.k.re, r.k.im);
            let w = r.w_exact.map(|w| format!("{:.6}{:+.6}i", w.re, w.im)).unwrap_or_default();
            let flag = if r.is_decaying() { "" } else { "  [gamma < 0]" };
            (
                r.n,
                r.branch,
                format!(
                    "{:>4} {:>6} {:>2} {:>24} {:>24} {:>12.6e} {:>10.3e} {:>10.3e}{flag}",
                    r.n,
                    r.branch.as_str(),
                    r.order,
                    k,
                    w,
                    r.gamma,
                    r.rel_error.unwrap_or(f64::NAN),
                    r.residual
                ),
            )
        })
        .collect();
    rows.extend(
        report
            .failures
            .iter()
            .map(|f| (f.n, f.branch, format!("{:>4} {:>6}  ERROR: {}", f.n, f.branch.as_str(), f.error))),
    );
    rows.sort_by_key(|r| (r.0, r.1));
    for (_, _, line) in rows {
        let _ = writeln!(s, "{line}");
    }
    s
}

pub fn compare_table(report: &CompareReport) -> String {
    let mut s = String::new();
    let _ = write!(s, "{:>4}", "n");
    for k in 0..=report.k_max {
        let _ = write!(s, " {:>10}", format!("K={k}"));
    }
    let _ = writeln!(s, " {:>10}", format!("z^{}", report.fixed_order));
    for row in &report.rows {
        let _ = write!(s, "{:>4}", row.n);
        for e in &row.expansion_errors {
            let _ = write!(s, " {e:>10.3e}");
        }
        let _ = writeln!(s, " {:>10.3e}", row.fixed_order_error);
    }
    for f in &report.failures {
        let _ = writeln!(s, "{:>4}  ERROR: {}", f.n, f.error);
    }
    s
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

pub fn plot_title(config: &SweepConfig) -> String {
    format!("Resonance poles k = w/(2 pi i): {}", config.model)
}

/// Writes every requested format for a solve run; returns the paths written.
pub fn write_solve_outputs(config: &SweepConfig, report: &SolveReport) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for fmt in &config.outputs {
        let path = match fmt {
            OutputFormat::Csv => write_file(&config.output_path, "resonances.csv", &records_to_csv(&report.records)?)?,
            OutputFormat::Json => {
                write_file(&config.output_path, "resonances.json", &records_to_json(&report.records)?)?
            }
            OutputFormat::Svg => write_file(
                &config.output_path,
                "poles.svg",
                &render_pole_svg(&report.records, &plot_title(config))?,
            )?,
        };
        written.push(path);
    }
    Ok(written)
}

pub fn write_compare_outputs(config: &SweepConfig, report: &CompareReport) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for fmt in &config.outputs {
        match fmt {
            OutputFormat::Csv => written.push(write_file(&config.output_path, "convergence.csv", &compare_to_csv(report)?)?),
            OutputFormat::Json => {
                written.push(write_file(&config.output_path, "convergence.json", &compare_to_json(report)?)?)
            }
            OutputFormat::Svg => {}
        }
    }
    Ok(written)
}

pub fn write_plot(config: &SweepConfig, records: &[ResonanceRecord]) -> Result<PathBuf> {
    write_file(&config.output_path, "poles.svg", &render_pole_svg(records, &plot_title(config))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{free_pole, ModelSpec};
    use num_complex::Complex64;

    fn record(n: i64, branch: Branch, w: Complex64) -> ResonanceRecord {
        ResonanceRecord::from_pole(&ModelSpec::winter(-0.1), n, branch, 2, w)
    }

    #[test]
    fn csv_header_and_precision() {
        let mut r = record(1, Branch::None, Complex64::new(0.1, 6.0));
        r.w_exact = Some(Complex64::new(0.1 + 1e-17, 6.0));
        let text = records_to_csv(&[r.clone()]).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        let rows = parse_csv_rows(&text).unwrap();
        assert_eq!(rows[0], RecordRow::from(&r));
        assert_eq!(rows[0].rel_error, None);
    }

    #[test]
    fn empty_plot_is_an_error() {
        assert_eq!(render_pole_svg(&[], "x"), Err(ResonanceError::EmptyPlot));
    }

    #[test]
    fn single_marker() {
        let svg = render_pole_svg(&[record(1, Branch::None, free_pole(1))], "free").unwrap();
        assert_eq!(svg.matches("class=\"pole").count(), 1);
        assert!(svg.contains("viewBox=\"0 0 800 600\""));
        assert!(svg.contains(">Re k<") && svg.contains(">Im k<"));
    }

    #[test]
    fn marker_shapes_by_branch() {
        let recs = [
            record(1, Branch::Plus, Complex64::new(0.2, 6.0)),
            record(1, Branch::Minus, Complex64::new(0.3, 7.0)),
        ];
        let svg = render_pole_svg(&recs, "t").unwrap();
        assert!(svg.contains("class=\"pole plus\""));
        assert!(svg.contains("<path class=\"pole minus\""));
    }

    #[test]
    fn title_is_escaped() {
        let svg = render_pole_svg(&[record(1, Branch::None, free_pole(1))], "a<b & c").unwrap();
        assert!(svg.contains("a&lt;b &amp; c"));
    }
}
