//! Minimal SVG line charts of sweep throughput.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::sweep::{SweepAxis, SweepRow};
use crate::{Error, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 230.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Renders throughput against the sweep variable, one polyline per series
/// (solver, duplex mode, altitude and, for overlap sweeps, access weight).
/// Failed rows are left out.
pub fn render_svg(rows: &[SweepRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::Validation(vec!["cannot plot an empty table".into()]));
    }
    let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for row in rows {
        if let Some(res) = row.result() {
            series
                .entry(row.series_label())
                .or_default()
                .push((row.x, res.report.throughput / 1e6));
        }
    }
    if series.is_empty() {
        return Err(Error::Validation(vec!["no successful rows to plot".into()]));
    }
    for pts in series.values_mut() {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    }

    let axis = rows[0].axis;
    let (x_label, (mut x_min, mut x_max)) = match axis {
        SweepAxis::Overlap => ("Normalized bandwidth overlap w_o/W", (0.0, 1.0)),
        SweepAxis::Power | SweepAxis::Single => {
            let xs = series.values().flatten().map(|p| p.0);
            let lo = xs.clone().fold(f64::INFINITY, f64::min);
            let hi = xs.fold(f64::NEG_INFINITY, f64::max);
            ("Total transmit power (dBm)", (lo, hi))
        }
    };
    if x_max <= x_min {
        x_min -= 1.0;
        x_max += 1.0;
    }
    let y_top = series
        .values()
        .flatten()
        .map(|p| p.1)
        .fold(0.0, f64::max)
        .max(1e-9)
        * 1.05;

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| TOP + plot_h - y / y_top * plot_h;

    let mut svg = String::new();
    let w = &mut svg;
    // fmt::Write into a String cannot fail
    let _ = writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let title = match axis {
        SweepAxis::Overlap => "Throughput vs bandwidth overlap",
        _ => "Throughput vs transmit power",
    };
    let _ = writeln!(
        w,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{title}</text>"#,
        LEFT + plot_w / 2.0
    );
    let _ = writeln!(
        w,
        r#"<path d="M{LEFT},{TOP} V{} H{}" fill="none" stroke="black"/>"#,
        TOP + plot_h,
        LEFT + plot_w
    );
    for i in 0..=TICKS {
        let frac = i as f64 / TICKS as f64;
        let xv = x_min + frac * (x_max - x_min);
        let yv = frac * y_top;
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            w,
            r#"<line x1="{px:.2}" y1="{b}" x2="{px:.2}" y2="{b2}" stroke="black"/><text x="{px:.2}" y="{t}" text-anchor="middle">{}</text>"#,
            tick_label(xv),
            b = TOP + plot_h,
            b2 = TOP + plot_h + 5.0,
            t = TOP + plot_h + 18.0
        );
        let _ = writeln!(
            w,
            r#"<line x1="{l2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{t}" y="{ty:.2}" text-anchor="end">{}</text>"#,
            tick_label(yv),
            l2 = LEFT - 5.0,
            t = LEFT - 8.0,
            ty = py + 4.0
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        escape(x_label)
    );
    let _ = writeln!(
        w,
        r#"<text x="20" y="{cy}" text-anchor="middle" transform="rotate(-90 20 {cy})">Throughput (Mbps)</text>"#,
        cy = TOP + plot_h / 2.0
    );

    for (i, (label, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            w,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            points.join(" ")
        );
        let ly = TOP + 10.0 + i as f64 * 18.0;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            w,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(label)
        );
    }
    let _ = writeln!(w, "</svg>");
    Ok(svg)
}

pub fn emit_plot(rows: &[SweepRow], path: &Path) -> Result<()> {
    let svg = render_svg(rows)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}
