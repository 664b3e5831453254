use std::fmt::Write;

use crate::corestats::{format_fixed, Histogram};
use crate::loglog::RegressionResult;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct HistogramAnnotations {
    pub title: String,
    /// Citation value marking the start of the h-core.
    pub h_index: Option<u64>,
    /// Citation values to mark as outliers.
    pub outliers: Vec<u64>,
    /// Scale bar heights by `log10(1 + count)`.
    pub log_counts: bool,
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
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

fn open(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        out,
        r#"<text class="title" x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (x0, y0, x1, y1) = (LEFT, HEIGHT - BOTTOM, WIDTH - RIGHT, TOP);
    let _ = writeln!(
        out,
        r#"<path class="axes" d="M{x0:.2} {y1:.2} L{x0:.2} {y0:.2} L{x1:.2} {y0:.2}" fill="none" stroke="black"/>"#
    );
}

/// Bar chart of a histogram, one `rect` per bin.
pub fn render_histogram_svg(hist: &Histogram, notes: &HistogramAnnotations) -> String {
    let mut out = String::new();
    open(&mut out, &notes.title);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let base = HEIGHT - BOTTOM;
    let bar_w = plot_w / hist.bin_count as f64;
    let height_of = |c: u64| if notes.log_counts { (c as f64).ln_1p() } else { c as f64 };
    let top = hist.counts.iter().map(|&c| height_of(c)).fold(0.0, f64::max);
    let scale = if top > 0.0 { plot_h / top } else { 0.0 };

    for (i, &c) in hist.counts.iter().enumerate() {
        let h = height_of(c) * scale;
        let x = LEFT + i as f64 * bar_w;
        let _ = writeln!(
            out,
            r##"<rect class="bar" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#4a6fa5" stroke="white"><title>bin {}: {}</title></rect>"##,
            x,
            base - h,
            bar_w,
            h,
            i + 1,
            c
        );
        let _ = writeln!(
            out,
            r#"<text class="bin-label" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            x + bar_w / 2.0,
            base + 14.0,
            i + 1
        );
    }

    let max_count = hist.counts.iter().copied().max().unwrap_or(0);
    let _ = writeln!(
        out,
        r#"<text class="count-label" x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
        LEFT - 6.0,
        TOP + 4.0,
        max_count
    );
    let _ = writeln!(
        out,
        r#"<text class="axis-title" x="{:.2}" y="{:.2}" text-anchor="middle">bin ({} scale, {} - {} cites){}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 16.0,
        match hist.scale {
            crate::corestats::BinScale::Linear => "linear",
            crate::corestats::BinScale::Log1p => "log(x+1)",
        },
        hist.range_min,
        hist.range_max,
        if notes.log_counts { ", log counts" } else { "" }
    );

    if let Some(h) = notes.h_index {
        let ord = hist.bin_ordinal(h);
        let x = LEFT + (ord - 1) as f64 * bar_w;
        let _ = writeln!(
            out,
            r#"<line class="h-marker" x1="{x:.2}" y1="{TOP:.2}" x2="{x:.2}" y2="{base:.2}" stroke="crimson" stroke-dasharray="4 3"><title>h-index {h}</title></line>"#
        );
    }
    for &v in &notes.outliers {
        let ord = hist.bin_ordinal(v);
        let cx = LEFT + (ord as f64 - 0.5) * bar_w;
        let cy = base - height_of(hist.counts[ord - 1]) * scale - 8.0;
        let _ = writeln!(
            out,
            r#"<circle class="outlier" cx="{cx:.2}" cy="{cy:.2}" r="3.5" fill="crimson"><title>{v} cites</title></circle>"#
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Caption text used under the regression plot.
pub fn regression_caption(result: &RegressionResult) -> String {
    let f = if result.f_capped {
        String::from("F capped")
    } else {
        format!("F = {}", format_fixed(result.f_stat, 2))
    };
    format!(
        "slope = {}, R2 = {}, {}, {} points ({} empty dropped), {}",
        format_fixed(result.slope, 2),
        format_fixed(result.r2, 4),
        f,
        result.n_points,
        result.n_dropped_empty,
        result.significance.label()
    )
}

/// Scatter of the regression points with the fitted line.
pub fn render_regression_svg(result: &RegressionResult, title: &str) -> String {
    let mut out = String::new();
    open(&mut out, title);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let fitted = |x: f64| result.intercept + result.slope * x;
    let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in &result.points {
        x_lo = x_lo.min(p.x);
        x_hi = x_hi.max(p.x);
        y_lo = y_lo.min(p.y).min(fitted(p.x));
        y_hi = y_hi.max(p.y).max(fitted(p.x));
    }
    if !(x_hi > x_lo) {
        x_hi = x_lo + 1.0;
    }
    if !(y_hi > y_lo) {
        y_hi = y_lo + 1.0;
    }
    let pad = 0.05 * (y_hi - y_lo);
    let (y_lo, y_hi) = (y_lo - pad, y_hi + pad);
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| HEIGHT - BOTTOM - (y - y_lo) / (y_hi - y_lo) * plot_h;

    for p in &result.points {
        let _ = writeln!(
            out,
            r##"<circle class="point" cx="{:.2}" cy="{:.2}" r="3.5" fill="#4a6fa5"><title>bin {}</title></circle>"##,
            sx(p.x),
            sy(p.y),
            p.bin
        );
    }
    let _ = writeln!(
        out,
        r#"<line class="fit" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="crimson"/>"#,
        sx(x_lo),
        sy(fitted(x_lo)),
        sx(x_hi),
        sy(fitted(x_hi))
    );
    let _ = writeln!(
        out,
        r#"<text class="axis-title" x="{:.2}" y="{:.2}" text-anchor="middle">log10(cites + 1), bin midpoint</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 30.0
    );
    let _ = writeln!(
        out,
        r#"<text class="caption" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(&regression_caption(result))
    );
    out.push_str("</svg>\n");
    out
}
