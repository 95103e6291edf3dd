//! Standalone SVG line charts for report series.
//!
//! Deliberately small: one polyline per algorithm, tick-labelled axes, and a
//! legend. The y axis defaults to dB (`10 log10`) for the MSE-style metrics,
//! matching how these curves are usually read; linear scale is available by
//! flag. Output is plain static SVG, no scripts.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::report::Report;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// Floor for dB conversion so zero or denormal values stay finite.
const DB_FLOOR: f64 = 1e-300;

fn to_db(v: f64) -> f64 {
    10.0 * v.max(DB_FLOOR).log10()
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Render every series carrying `metric` into an SVG chart at `path`.
pub fn render_svg(report: &Report, metric: &str, log_scale: bool, path: &Path) -> Result<()> {
    let svg = render_svg_string(report, metric, log_scale)?;
    std::fs::write(path, svg).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Render to a string (used by tests and the file writer).
pub fn render_svg_string(report: &Report, metric: &str, log_scale: bool) -> Result<String> {
    let series = report.series_for_metric(metric);
    if series.is_empty() {
        let available = report.metrics().join(", ");
        return Err(Error::Config(format!(
            "unknown metric '{metric}'; report contains: {available}"
        )));
    }
    let transformed: Vec<(String, Vec<f64>)> = series
        .iter()
        .map(|s| {
            let values: Vec<f64> = if log_scale {
                s.values.iter().map(|&v| to_db(v)).collect()
            } else {
                s.values.clone()
            };
            (s.label.clone(), values)
        })
        .collect();

    let max_len = transformed.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for (_, values) in &transformed {
        for &v in values {
            y_min = y_min.min(v);
            y_max = y_max.max(v);
        }
    }
    if !y_min.is_finite() || !y_max.is_finite() {
        // No points at all: draw an empty frame around [0, 1].
        y_min = 0.0;
        y_max = 1.0;
    }
    if y_max - y_min < 1e-12 {
        y_min -= 1.0;
        y_max += 1.0;
    }
    let x_max = max_len.max(2) as f64;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |i: f64| MARGIN_LEFT + (i / (x_max - 1.0)) * plot_w;
    let y_of = |v: f64| MARGIN_TOP + (1.0 - (v - y_min) / (y_max - y_min)) * plot_h;

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();

    // Frame.
    writeln!(
        svg,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black" stroke-width="1"/>"#
    )
    .unwrap();

    // Y ticks and grid.
    let y_ticks = nice_ticks(y_min, y_max, 6);
    for &t in &y_ticks {
        if t < y_min - 1e-12 || t > y_max + 1e-12 {
            continue;
        }
        let y = y_of(t);
        writeln!(
            svg,
            r##"<line x1="{MARGIN_LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd" stroke-width="1"/>"##,
            MARGIN_LEFT + plot_w
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 8.0,
            y + 4.0,
            format_tick(t)
        )
        .unwrap();
    }

    // X ticks.
    let x_ticks = nice_ticks(1.0, x_max, 8);
    for &t in &x_ticks {
        if t < 1.0 || t > x_max {
            continue;
        }
        let x = x_of(t - 1.0);
        writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 6.0
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            MARGIN_TOP + plot_h + 22.0,
            format_tick(t)
        )
        .unwrap();
    }

    // Axis labels.
    let y_label = if log_scale {
        format!("{metric} (dB)")
    } else {
        metric.to_string()
    };
    writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="14" text-anchor="middle">iterations</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 14.0
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="20" y="{:.2}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        xml_escape(&y_label)
    )
    .unwrap();

    // Series.
    for (idx, (label, values)) in transformed.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        if values.len() == 1 {
            let (x, y) = (x_of(0.0), y_of(values[0]));
            writeln!(svg, r#"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="{color}"/>"#).unwrap();
        } else if !values.is_empty() {
            let mut points = String::new();
            for (i, &v) in values.iter().enumerate() {
                let _ = write!(points, "{:.3},{:.3} ", x_of(i as f64), y_of(v));
            }
            writeln!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                points.trim_end()
            )
            .unwrap();
        }
        // Legend entry.
        let ly = MARGIN_TOP + 14.0 + idx as f64 * 20.0;
        let lx = MARGIN_LEFT + plot_w + 16.0;
        writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            lx + 24.0
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13">{}</text>"#,
            lx + 30.0,
            ly + 4.0,
            xml_escape(label)
        )
        .unwrap();
    }

    writeln!(svg, "</svg>").unwrap();
    Ok(svg)
}

/// Round tick positions covering `[lo, hi]` with roughly `count` steps.
fn nice_ticks(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let span = hi - lo;
    if span <= 0.0 || !span.is_finite() {
        return vec![lo];
    }
    let raw_step = span / count as f64;
    let mag = 10f64.powf(raw_step.log10().floor());
    let norm = raw_step / mag;
    let step = if norm < 1.5 {
        mag
    } else if norm < 3.0 {
        2.0 * mag
    } else if norm < 7.0 {
        5.0 * mag
    } else {
        10.0 * mag
    };
    let start = (lo / step).ceil() * step;
    let mut ticks = Vec::new();
    let mut t = start;
    while t <= hi + step * 1e-9 {
        ticks.push(t);
        t += step;
    }
    ticks
}

fn format_tick(t: f64) -> String {
    if t == 0.0 {
        return "0".into();
    }
    let a = t.abs();
    if (1e-3..1e6).contains(&a) {
        let s = format!("{t:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{t:.1e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{AlgorithmConfig, DomainConfig, NoiseConfig, TapLawConfig, VariantConfig};
    use crate::report::{Report, ReportMetadata, Series, SCHEMA_VERSION};

    fn report_with(series: Vec<Series>) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            metadata: ReportMetadata {
                name: "svg-test".into(),
                preset: None,
                seed: 1,
                runs: 1,
                iterations: series.first().map(|s| s.values.len()).unwrap_or(0),
                diverged_runs: 0,
                parameters: crate::config::ExperimentConfig {
                    name: "svg-test".into(),
                    n: 2,
                    sparsity_levels: vec![1],
                    tap_law: TapLawConfig::PlusMinusOne,
                    unit_power: false,
                    channel_domain: DomainConfig::TIME,
                    noise: NoiseConfig::Variance(0.01),
                    iterations: 2,
                    runs: 1,
                    seed: 1,
                    snapshot_iteration: None,
                    steady_window: 0.2,
                    redraw_channel: true,
                    metric: "mse".into(),
                    algorithms: vec![AlgorithmConfig {
                        label: "lms".into(),
                        variant: VariantConfig::Standard,
                        mu: 0.05,
                        rho: None,
                        eps: None,
                        p: None,
                        in_basis: false,
                    }],
                },
            },
            series,
            analysis: vec![],
        }
    }

    fn series(label: &str, values: Vec<f64>) -> Series {
        Series {
            label: label.into(),
            metric: "mse".into(),
            sparsity: 1,
            values,
            std_dev: vec![],
            steady_state: None,
            diverged_runs: 0,
        }
    }

    /// Minimal well-formedness check: every opened tag closes, in order.
    fn assert_well_formed(svg: &str) {
        let mut stack: Vec<String> = Vec::new();
        let mut rest = svg;
        while let Some(start) = rest.find('<') {
            let end = rest[start..].find('>').map(|e| start + e).expect("unclosed tag");
            let tag = &rest[start + 1..end];
            rest = &rest[end + 1..];
            if tag.starts_with('?') || tag.starts_with('!') {
                continue;
            }
            if let Some(name) = tag.strip_prefix('/') {
                let open = stack.pop().unwrap_or_else(|| panic!("stray closing tag {name}"));
                assert_eq!(open, name, "mismatched close");
            } else if !tag.ends_with('/') {
                let name: String = tag.split_whitespace().next().unwrap().to_string();
                stack.push(name);
            }
        }
        assert!(stack.is_empty(), "unclosed tags: {stack:?}");
    }

    #[test]
    fn two_series_two_polylines_and_legend() {
        let report = report_with(vec![
            series("lms", vec![1.0, 0.5, 0.25, 0.12]),
            series("rl1", vec![0.8, 0.4, 0.2, 0.1]),
        ]);
        let svg = render_svg_string(&report, "mse", true).unwrap();
        assert_well_formed(&svg);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">lms<"));
        assert!(svg.contains(">rl1<"));
    }

    #[test]
    fn single_point_series_renders_marker() {
        let report = report_with(vec![series("lms", vec![0.5])]);
        let svg = render_svg_string(&report, "mse", false).unwrap();
        assert_well_formed(&svg);
        assert!(svg.contains("<circle"));
    }

    #[test]
    fn db_mapping_value() {
        assert_eq!(to_db(0.01), -20.0);
        assert!(to_db(0.0).is_finite());
    }

    #[test]
    fn unknown_metric_is_usage_error() {
        let report = report_with(vec![series("lms", vec![1.0])]);
        match render_svg_string(&report, "snr", true) {
            Err(Error::Config(msg)) => assert!(msg.contains("mse"), "{msg}"),
            other => panic!("expected Config error, got {other:?}"),
        }
    }

    #[test]
    fn coordinates_are_finite_for_finite_series() {
        let report = report_with(vec![series("lms", vec![0.0, 1e-200, 3.0e5])]);
        let svg = render_svg_string(&report, "mse", true).unwrap();
        assert_well_formed(&svg);
        assert!(!svg.contains("NaN"));
        assert!(!svg.contains("inf"));
    }

    #[test]
    fn file_output_is_written() {
        let report = report_with(vec![series("lms", vec![1.0, 0.5])]);
        let path = std::env::temp_dir().join("sparselms_chart.svg");
        render_svg(&report, "mse", true, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("<svg"));
    }
}
