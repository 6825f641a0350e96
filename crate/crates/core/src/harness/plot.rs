//! Minimal SVG line plots rendered from the metrics CSV.

use std::fmt::Write;

use crate::error::Result;
use crate::sim::TtiMetrics;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(name: &str, points: Vec<(f64, f64)>) -> Self {
        Self { name: name.to_string(), points }
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Step of roughly `span / 5` from the 1-2-5 sequence.
fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let nice = if f <= 1.0 {
        1.0
    } else if f <= 2.0 {
        2.0
    } else if f <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> (f64, f64, Vec<f64>, usize) {
    let (lo, hi) = if hi - lo < 1e-12 { (lo - 1.0, hi + 1.0) } else { (lo, hi) };
    let step = nice_step(hi - lo);
    let a = (lo / step).floor() * step;
    let b = (hi / step).ceil() * step;
    let n = ((b - a) / step).round() as usize;
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let marks = (0..=n).map(|i| a + i as f64 * step).collect();
    (a, b, marks, decimals)
}

fn label(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// Renders series as polylines with axes, ticks and a legend.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let pts = || series.iter().flat_map(|s| s.points.iter().copied()).filter(|(x, y)| x.is_finite() && y.is_finite());
    let fold = |f: fn(&(f64, f64)) -> f64| {
        pts().map(|p| f(&p)).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)))
    };
    let (mut x0, mut x1) = fold(|p| p.0);
    let (mut y0, mut y1) = fold(|p| p.1);
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let (xa, xb, xt, xd) = ticks(x0, x1);
    let (ya, yb, yt, yd) = ticks(y0.min(0.0), y1);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - xa) / (xb - xa) * pw;
    let sy = |y: f64| TOP + ph - (y - ya) / (yb - ya) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="15">{}</text>"#, WIDTH / 2.0, escape(title));
    for &x in &xt {
        let px = sx(x);
        let _ = writeln!(s, r##"<line x1="{px:.2}" y1="{TOP:.2}" x2="{px:.2}" y2="{:.2}" stroke="#e0e0e0"/>"##, TOP + ph);
        let _ = writeln!(s, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, TOP + ph + 16.0, label(x, xd));
    }
    for &y in &yt {
        let py = sy(y);
        let _ = writeln!(s, r##"<line x1="{LEFT:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#e0e0e0"/>"##, LEFT + pw);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, LEFT - 6.0, py + 4.0, label(y, yd));
    }
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, HEIGHT - 12.0, escape(x_label));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(y_label)
    );
    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = ser
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        if !coords.is_empty() {
            let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, coords.join(" "));
        }
        let ly = TOP + 14.0 + 16.0 * i as f64;
        let lx = LEFT + pw - 150.0;
        let _ = writeln!(s, r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#, lx + 18.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 24.0, ly + 4.0, escape(&ser.name));
    }
    s.push_str("</svg>\n");
    s
}

/// Per-second rates over a trailing window of `window` rows.
fn trailing_rate(rows: &[TtiMetrics], window: usize, f: impl Fn(&TtiMetrics) -> u64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(rows.len());
    let mut sum = 0u64;
    for (i, r) in rows.iter().enumerate() {
        sum += f(r);
        if i >= window {
            sum -= f(&rows[i - window]);
        }
        if i + 1 >= window {
            let span = r.time - if i >= window { rows[i - window].time } else { 0.0 };
            out.push((r.time, sum as f64 / span));
        }
    }
    out
}

/// `latency.svg`, `success_ratio.svg` and `tx_rate.svg` from the text of a
/// `metrics.csv`.
pub fn plots_from_csv(text: &str) -> Result<Vec<(String, String)>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<TtiMetrics> = rdr.deserialize().collect::<std::result::Result<_, _>>()?;
    let latency: Vec<(f64, f64)> = rows.iter().filter(|r| r.completed > 0).map(|r| (r.time, r.mean_latency)).collect();
    let ratio: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.completed + r.failed > 0)
        .map(|r| (r.time, r.completed as f64 / (r.completed + r.failed) as f64))
        .collect();
    let dt = rows.first().map_or(1.0, |r| r.time / (r.tti + 1) as f64);
    let window = ((1.0 / dt).round() as usize).max(1);
    let tx = trailing_rate(&rows, window, |r| r.tx_certified);
    let done = trailing_rate(&rows, window, |r| r.completions);
    Ok(vec![
        (
            "latency.svg".into(),
            line_plot("Mean latency of completed tasks", "time (s)", "latency (s)", &[Series::new("mean latency", latency)]),
        ),
        (
            "success_ratio.svg".into(),
            line_plot("Success ratio", "time (s)", "completed / finished", &[Series::new("success ratio", ratio)]),
        ),
        (
            "tx_rate.svg".into(),
            line_plot(
                "Certified transactions and completions",
                "time (s)",
                "per second (1 s window)",
                &[Series::new("certified tx/s", tx), Series::new("completions/s", done)],
            ),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_cover_the_range_with_round_steps() {
        let (a, b, marks, d) = ticks(0.13, 0.97);
        assert_eq!((a, b, d), (0.0, 1.0, 1));
        assert_eq!(marks.len(), 6);
        let (_, _, marks, d) = ticks(0.0, 60.0);
        assert_eq!(marks.last().copied(), Some(60.0));
        assert_eq!(d, 0);
        assert_eq!(label(-0.0, 1), "0.0");
    }

    #[test]
    fn plot_has_one_polyline_per_series_and_a_legend() {
        let svg = line_plot(
            "a & b",
            "x",
            "y",
            &[Series::new("one", vec![(0.0, 1.0), (1.0, 2.0)]), Series::new("two", vec![(0.0, 0.5)])],
        );
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("a &amp; b"));
        assert!(svg.contains(">one</text>") && svg.contains(">two</text>"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn empty_input_still_renders() {
        let svg = line_plot("empty", "x", "y", &[Series::new("none", vec![])]);
        assert!(!svg.contains("<polyline"));
        let header = super::super::output::METRIC_COLUMNS.join(",") + "\n";
        assert_eq!(plots_from_csv(&header).unwrap().len(), 3);
    }

    #[test]
    fn trailing_rate_of_a_constant_stream() {
        let rows: Vec<TtiMetrics> = (0..40)
            .map(|i| TtiMetrics { tti: i, time: (i + 1) as f64 * 0.05, completions: 2, ..Default::default() })
            .collect();
        let r = trailing_rate(&rows, 20, |r| r.completions);
        assert_eq!(r.len(), 21);
        assert!(r.iter().all(|&(_, v)| (v - 40.0).abs() < 1e-9));
    }
}
