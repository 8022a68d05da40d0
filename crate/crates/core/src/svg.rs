//! Minimal SVG line and radar charts.

use std::fmt::Write;

use chrono::NaiveDate;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 360.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn header(out: &mut String, width: f64, height: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
        width / 2.0,
        escape(title)
    );
}

/// A labelled curve over consecutive days starting at `start`.
pub struct Line<'a> {
    pub label: &'a str,
    pub start: NaiveDate,
    pub values: &'a [f64],
}

/// Polyline chart with a shared date axis. Non-finite values break the line.
pub fn line_chart(title: &str, y_label: &str, lines: &[Line<'_>]) -> String {
    let mut out = String::new();
    header(&mut out, WIDTH, HEIGHT, title);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

    let first = lines.iter().map(|l| l.start).min();
    let last = lines
        .iter()
        .filter(|l| !l.values.is_empty())
        .map(|l| l.start + chrono::Days::new(l.values.len() as u64 - 1))
        .max();
    let finite = lines.iter().flat_map(|l| l.values.iter()).filter(|v| v.is_finite());
    let (mut lo, mut hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
        (a.min(v), b.max(v))
    });
    if !lo.is_finite() {
        (lo, hi) = (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        lo -= 0.5;
        hi += 0.5;
    }
    let (Some(first), Some(last)) = (first, last) else {
        out.push_str("</svg>\n");
        return out;
    };
    let days = ((last - first).num_days().max(1)) as f64;
    let x = |d: i64| MARGIN_LEFT + plot_w * d as f64 / days;
    let y = |v: f64| MARGIN_TOP + plot_h * (hi - v) / (hi - lo);

    // Axes and ticks.
    let _ = writeln!(
        out,
        r#"<g stroke="black" fill="none"><line x1="{l:.1}" y1="{b:.1}" x2="{r:.1}" y2="{b:.1}"/><line x1="{l:.1}" y1="{t:.1}" x2="{l:.1}" y2="{b:.1}"/></g>"#,
        l = MARGIN_LEFT,
        r = MARGIN_LEFT + plot_w,
        t = MARGIN_TOP,
        b = MARGIN_TOP + plot_h
    );
    for i in 0..=4 {
        let v = lo + (hi - lo) * i as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 6.0,
            y(v) + 4.0,
            tick(v)
        );
        let d = (days * i as f64 / 4.0).round() as i64;
        let date = first + chrono::Duration::days(d);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{date}</text>"#,
            x(d),
            MARGIN_TOP + plot_h + 18.0
        );
    }
    if lo < 0.0 && hi > 0.0 {
        let _ = writeln!(
            out,
            r##"<line x1="{:.1}" y1="{y0:.1}" x2="{:.1}" y2="{y0:.1}" stroke="#bbbbbb" stroke-dasharray="4 3"/>"##,
            MARGIN_LEFT,
            MARGIN_LEFT + plot_w,
            y0 = y(0.0)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(y_label)
    );

    for (k, line) in lines.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let offset = (line.start - first).num_days();
        let mut segments: Vec<Vec<String>> = vec![Vec::new()];
        for (i, &v) in line.values.iter().enumerate() {
            if v.is_finite() {
                segments
                    .last_mut()
                    .unwrap()
                    .push(format!("{:.2},{:.2}", x(offset + i as i64), y(v)));
            } else if !segments.last().unwrap().is_empty() {
                segments.push(Vec::new());
            }
        }
        for seg in segments.iter().filter(|s| !s.is_empty()) {
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
                seg.join(" ")
            );
        }
        let ly = MARGIN_TOP + 16.0 * k as f64 + 8.0;
        let lx = MARGIN_LEFT + plot_w + 12.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{colour}" stroke-width="3"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 18.0,
            lx + 24.0,
            ly + 4.0,
            escape(line.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e5).contains(&a) {
        format!("{v:.2e}")
    } else if a >= 100.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.3}")
    }
}

/// Vertex positions of a radar polygon centred at `(cx, cy)`, first axis
/// pointing up, scaled so the largest value sits at `radius`.
pub fn radar_points(values: &[f64], cx: f64, cy: f64, radius: f64) -> Vec<(f64, f64)> {
    let max = values.iter().copied().fold(0.0, f64::max);
    let n = values.len();
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let angle = std::f64::consts::TAU * i as f64 / n as f64 - std::f64::consts::FRAC_PI_2;
            let r = if max > 0.0 { radius * v / max } else { 0.0 };
            (cx + r * angle.cos(), cy + r * angle.sin())
        })
        .collect()
}

pub fn radar_chart(title: &str, axes: &[String], values: &[f64]) -> String {
    let (w, h) = (480.0, 480.0);
    let (cx, cy, radius) = (w / 2.0, h / 2.0 + 10.0, 170.0);
    let mut out = String::new();
    header(&mut out, w, h, title);
    let n = values.len();
    if n == 0 {
        out.push_str("</svg>\n");
        return out;
    }
    let spokes = radar_points(&vec![1.0; n], cx, cy, radius);
    for ring in 1..=4 {
        let r = radius * ring as f64 / 4.0;
        let pts: Vec<String> = radar_points(&vec![1.0; n], cx, cy, r)
            .iter()
            .map(|(x, y)| format!("{x:.2},{y:.2}"))
            .collect();
        let _ = writeln!(
            out,
            r##"<polygon fill="none" stroke="#dddddd" points="{}"/>"##,
            pts.join(" ")
        );
    }
    for (i, (x, y)) in spokes.iter().enumerate() {
        let _ = writeln!(
            out,
            r##"<line x1="{cx:.2}" y1="{cy:.2}" x2="{x:.2}" y2="{y:.2}" stroke="#bbbbbb"/>"##
        );
        let (lx, ly) = (cx + (x - cx) * 1.12, cy + (y - cy) * 1.12);
        let label = axes.get(i).map(String::as_str).unwrap_or("");
        let _ = writeln!(
            out,
            r#"<text x="{lx:.2}" y="{:.2}" text-anchor="middle">{} ({:.3})</text>"#,
            ly + 4.0,
            escape(label),
            values[i]
        );
    }
    let pts: Vec<String> = radar_points(values, cx, cy, radius)
        .iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect();
    let _ = writeln!(
        out,
        r##"<polygon fill="#1f77b4" fill-opacity="0.3" stroke="#1f77b4" stroke-width="2" points="{}"/>"##,
        pts.join(" ")
    );
    out.push_str("</svg>\n");
    out
}
