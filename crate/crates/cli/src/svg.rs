//! Minimal SVG writer. Every document carries its numbers in a leading
//! `<!-- igam-data {...} -->` comment.

use std::fmt::Write;

use serde::Serialize;

pub const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

pub struct Svg {
    width: f64,
    height: f64,
    data: String,
    body: String,
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

impl Svg {
    pub fn new(width: f64, height: f64) -> Self {
        Svg { width, height, data: String::new(), body: String::new() }
    }

    /// `--` may not appear inside an XML comment; it can only occur inside
    /// JSON strings, where `-` is an equivalent spelling.
    pub fn data<T: Serialize>(&mut self, value: &T) -> serde_json::Result<()> {
        self.data = serde_json::to_string(value)?.replace("--", "-\\u002d");
        Ok(())
    }

    pub fn line(&mut self, (x1, y1): (f64, f64), (x2, y2): (f64, f64), stroke: &str, width: f64) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{stroke}" stroke-width="{width}"/>"#
        );
    }

    pub fn circle(&mut self, (cx, cy): (f64, f64), r: f64, fill: &str) {
        let _ = writeln!(self.body, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r}" fill="{fill}"/>"#);
    }

    pub fn rect(&mut self, (x, y): (f64, f64), (w, h): (f64, f64), fill: &str) {
        let _ = writeln!(self.body, r#"<rect x="{x}" y="{y}" width="{w}" height="{h}" fill="{fill}"/>"#);
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], stroke: &str) {
        let coords: Vec<String> = points.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="1.5"/>"#,
            coords.join(" ")
        );
    }

    pub fn text(&mut self, (x, y): (f64, f64), size: f64, anchor: &str, content: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="{size}" text-anchor="{anchor}">{}</text>"#,
            escape(content)
        );
    }

    pub fn raw(&mut self, element: &str) {
        self.body.push_str(element);
        self.body.push('\n');
    }

    pub fn finish(self) -> String {
        let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            w = self.width,
            h = self.height
        );
        if !self.data.is_empty() {
            let _ = writeln!(out, "<!-- igam-data {} -->", self.data);
        }
        out.push_str(r#"<rect width="100%" height="100%" fill="white"/>"#);
        out.push('\n');
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

pub enum Style {
    Markers,
    Line,
}

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
}

/// Scatter and line chart on linear axes; callers pass already-transformed
/// coordinates for log plots.
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 };
    (lo - pad, hi + pad)
}

impl Chart {
    pub fn render(&self) -> Svg {
        let mut svg = Svg::new(WIDTH, HEIGHT);
        let all = || self.series.iter().flat_map(|s| s.points.iter().copied());
        let (x0, x1) = padded_range(all().map(|p| p.0));
        let (y0, y1) = padded_range(all().map(|p| p.1));
        let (left, right, top, bottom) = (MARGIN, WIDTH - 20.0, 40.0, HEIGHT - MARGIN);
        let sx = |x: f64| left + (x - x0) / (x1 - x0) * (right - left);
        let sy = |y: f64| bottom - (y - y0) / (y1 - y0) * (bottom - top);

        svg.line((left, bottom), (right, bottom), "black", 1.0);
        svg.line((left, bottom), (left, top), "black", 1.0);
        for i in 0..=4 {
            let t = i as f64 / 4.0;
            let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
            svg.line((sx(xv), bottom), (sx(xv), bottom + 5.0), "black", 1.0);
            svg.text((sx(xv), bottom + 18.0), 11.0, "middle", &format!("{xv:.2}"));
            svg.line((left - 5.0, sy(yv)), (left, sy(yv)), "black", 1.0);
            svg.text((left - 8.0, sy(yv) + 4.0), 11.0, "end", &format!("{yv:.2}"));
        }
        svg.text((WIDTH / 2.0, 22.0), 15.0, "middle", &self.title);
        svg.text(((left + right) / 2.0, HEIGHT - 15.0), 12.0, "middle", &self.x_label);
        svg.raw(&format!(
            r#"<text x="15" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 15 {:.2})">{}</text>"#,
            (top + bottom) / 2.0,
            (top + bottom) / 2.0,
            escape(&self.y_label)
        ));

        for (k, s) in self.series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let mapped: Vec<(f64, f64)> = s.points.iter().map(|&(x, y)| (sx(x), sy(y))).collect();
            match s.style {
                Style::Markers => mapped.iter().for_each(|&p| svg.circle(p, 3.5, color)),
                Style::Line => svg.polyline(&mapped, color),
            }
            let ly = top + 10.0 + 16.0 * k as f64;
            svg.rect((right - 150.0, ly - 8.0), (10.0, 10.0), color);
            svg.text((right - 135.0, ly + 1.0), 11.0, "start", &s.name);
        }
        svg
    }
}
