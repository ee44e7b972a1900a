//! CSV and SVG emission. Numbers are written in shortest round-trip form, so
//! identical data always gives identical bytes.

use std::fmt::Write;

use crate::data::{Dataset, Series, StationaryGrid};

pub const SERIES_HEADER: &str = "tau,C,u1_re,u1_im,u2_re,u2_im,eps";
pub const GRID_HEADER: &str = "r1,s,Cs";

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// One series gives the plain schema; several series get a leading `series`
/// column holding each row's label.
pub fn series_csv(series: &[Series]) -> String {
    let tagged = series.len() > 1;
    let mut out = String::new();
    if tagged {
        out.push_str("series,");
    }
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for s in series {
        for p in &s.samples {
            if tagged {
                out.push_str(&s.label);
                out.push(',');
            }
            let _ =
                writeln!(out, "{},{},{},{},{},{},{}", p.tau, p.concurrence, p.u1.re, p.u1.im, p.u2.re, p.u2.im, p.eps);
        }
    }
    out
}

pub fn grid_csv(grid: &StationaryGrid) -> String {
    let mut out = String::from(GRID_HEADER);
    out.push('\n');
    for (i, r1) in grid.r1.iter().enumerate() {
        for (j, s) in grid.s.iter().enumerate() {
            let _ = writeln!(out, "{r1},{s},{}", grid.at(i, j));
        }
    }
    out
}

pub fn csv(data: &Dataset) -> String {
    match data {
        Dataset::Series(s) => series_csv(s),
        Dataset::Grid(g) => grid_csv(g),
    }
}

pub fn svg(data: &Dataset, title: &str) -> String {
    match data {
        Dataset::Series(s) => series_svg(s, title),
        Dataset::Grid(g) => grid_svg(g, title),
    }
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
            _ => out.push(c),
        }
    }
    out
}

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn plot_width() -> f64 {
        WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    }

    fn plot_height() -> f64 {
        HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    }

    fn x(&self, v: f64) -> f64 {
        let span = if self.x_max > self.x_min { self.x_max - self.x_min } else { 1.0 };
        MARGIN_LEFT + (v - self.x_min) / span * Self::plot_width()
    }

    fn y(&self, v: f64) -> f64 {
        let span = if self.y_max > self.y_min { self.y_max - self.y_min } else { 1.0 };
        MARGIN_TOP + (1.0 - (v - self.y_min) / span) * Self::plot_height()
    }
}

fn open(out: &mut String, title: &str) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
}

fn axes(out: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let (x0, x1) = (MARGIN_LEFT, MARGIN_LEFT + Frame::plot_width());
    let (y0, y1) = (MARGIN_TOP, MARGIN_TOP + Frame::plot_height());
    let _ = writeln!(
        out,
        r#"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y1 - y0
    );
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let xv = frame.x_min + f * (frame.x_max - frame.x_min);
        let yv = frame.y_min + f * (frame.y_max - frame.y_min);
        let (xp, yp) = (frame.x(xv), frame.y(yv));
        let _ = writeln!(out, r#"<line x1="{xp:.2}" y1="{y1}" x2="{xp:.2}" y2="{:.2}" stroke="black"/>"#, y1 + 5.0);
        let _ = writeln!(
            out,
            r#"<text x="{xp:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
            y1 + 20.0,
            tick(xv)
        );
        let _ = writeln!(out, r#"<line x1="{:.2}" y1="{yp:.2}" x2="{x0}" y2="{yp:.2}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{}</text>"#,
            x0 - 8.0,
            yp + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        out,
        r#"<text class="x-label" x="{:.2}" y="{:.2}" font-size="16" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text class="y-label" x="20" y="{:.2}" font-size="16" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
}

fn tick(v: f64) -> String {
    let r = (v * 1000.0).round() / 1000.0;
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

pub fn series_svg(series: &[Series], title: &str) -> String {
    let points = series.iter().flat_map(|s| s.samples.iter());
    let x_max = points.clone().map(|p| p.tau).fold(0.0f64, f64::max);
    let y_max = points.map(|p| p.concurrence).fold(1.0f64, f64::max);
    let frame = Frame { x_min: 0.0, x_max, y_min: 0.0, y_max };

    let mut out = String::new();
    open(&mut out, title);
    axes(&mut out, &frame, "τ", "C");
    for (k, s) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let mut pts = String::new();
        for p in &s.samples {
            if !pts.is_empty() {
                pts.push(' ');
            }
            let _ = write!(pts, "{:.3},{:.3}", frame.x(p.tau), frame.y(p.concurrence));
        }
        let _ = writeln!(
            out,
            r#"<polyline data-series="{}" fill="none" stroke="{colour}" stroke-width="1.5" points="{pts}"/>"#,
            escape(&s.label)
        );
        let ly = MARGIN_TOP + 20.0 * k as f64 + 10.0;
        let lx = WIDTH - MARGIN_RIGHT + 10.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{colour}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="12">{}</text>"#, lx + 25.0, ly + 4.0, escape(&s.label));
    }
    out.push_str("</svg>\n");
    out
}

/// Heatmap with `r1` horizontal and `s` vertical, grey level = `Cs`.
pub fn grid_svg(grid: &StationaryGrid, title: &str) -> String {
    let frame = Frame { x_min: 0.0, x_max: 1.0, y_min: -1.0, y_max: 1.0 };
    let nx = grid.r1.len() as f64;
    let ny = grid.s.len() as f64;
    let cell_w = Frame::plot_width() / nx;
    let cell_h = Frame::plot_height() / ny;

    let mut out = String::new();
    open(&mut out, title);
    for (i, _) in grid.r1.iter().enumerate() {
        for (j, _) in grid.s.iter().enumerate() {
            let level = (255.0 * (1.0 - grid.at(i, j).clamp(0.0, 1.0))).round() as u8;
            let x = MARGIN_LEFT + cell_w * i as f64;
            let y = MARGIN_TOP + cell_h * (ny - 1.0 - j as f64);
            let _ = writeln!(
                out,
                r#"<rect x="{x:.3}" y="{y:.3}" width="{:.3}" height="{:.3}" fill="rgb({level},{level},{level})"/>"#,
                cell_w + 0.01,
                cell_h + 0.01
            );
        }
    }
    axes(&mut out, &frame, "r1", "s");
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="14">C (black = 1)</text>"#,
        WIDTH - MARGIN_RIGHT + 10.0,
        MARGIN_TOP + 10.0
    );
    out.push_str("</svg>\n");
    out
}
