//! Minimal SVG line/marker plots.

use std::fmt::Write as _;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 220.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Line,
    Dashed,
    Markers,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
    /// Palette index; analytic curves and their simulated markers share it.
    pub color: usize,
}

#[derive(Debug, Clone)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    pub series: Vec<Series>,
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    log_y: bool,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        let t = if self.log_y {
            (y.log10() - self.y0) / (self.y1 - self.y0)
        } else {
            (y - self.y0) / (self.y1 - self.y0)
        };
        HEIGHT - BOTTOM - t * (HEIGHT - TOP - BOTTOM)
    }
}

/// Round step (1, 2 or 5 times a power of ten) giving about `target` ticks.
fn nice_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let r = raw / mag;
    let f = if r < 1.5 {
        1.0
    } else if r < 3.5 {
        2.0
    } else if r < 7.5 {
        5.0
    } else {
        10.0
    };
    f * mag
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

impl Plot {
    fn frame(&self) -> Frame {
        let usable = |y: f64| y.is_finite() && (!self.log_y || y > 0.0);
        let pts = self.series.iter().flat_map(|s| s.points.iter()).filter(|p| p.0.is_finite() && usable(p.1));
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in pts {
            let y = if self.log_y { y.log10() } else { y };
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        if self.log_y {
            y0 = y0.floor();
            y1 = y1.ceil().max(y0 + 1.0);
        } else {
            y0 = y0.min(0.0);
            if y1 <= y0 {
                y1 = y0 + 1.0;
            }
            y1 += 0.05 * (y1 - y0);
        }
        Frame {
            x0,
            x1,
            y0,
            y1,
            log_y: self.log_y,
        }
    }

    pub fn render(&self) -> String {
        let f = self.frame();
        let mut s = String::new();
        let w = &mut s;
        writeln!(
            w,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        )
        .unwrap();
        writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
        let (l, r, t, b) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
        writeln!(w, r#"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="black"/>"#, r - l, b - t).unwrap();

        let step = nice_step(f.x1 - f.x0, 8.0);
        let mut x = (f.x0 / step).ceil() * step;
        while x <= f.x1 + 1e-9 * step {
            let p = f.px(x);
            writeln!(w, r#"<line x1="{p:.2}" y1="{b}" x2="{p:.2}" y2="{}" stroke="black"/>"#, b + 5.0).unwrap();
            writeln!(w, r#"<text x="{p:.2}" y="{}" text-anchor="middle">{}</text>"#, b + 18.0, fmt_tick(x)).unwrap();
            x += step;
        }
        if f.log_y {
            let mut e = f.y0;
            while e <= f.y1 + 1e-9 {
                let p = f.py(10f64.powf(e));
                writeln!(w, r#"<line x1="{}" y1="{p:.2}" x2="{l}" y2="{p:.2}" stroke="black"/>"#, l - 5.0).unwrap();
                writeln!(w, r#"<text x="{}" y="{:.2}" text-anchor="end">1e{}</text>"#, l - 8.0, p + 4.0, e as i64).unwrap();
                e += 1.0;
            }
        } else {
            let step = nice_step(f.y1 - f.y0, 6.0);
            let mut y = (f.y0 / step).ceil() * step;
            while y <= f.y1 + 1e-9 * step {
                let p = f.py(y);
                writeln!(w, r#"<line x1="{}" y1="{p:.2}" x2="{l}" y2="{p:.2}" stroke="black"/>"#, l - 5.0).unwrap();
                writeln!(w, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, l - 8.0, p + 4.0, fmt_tick(y)).unwrap();
                y += step;
            }
        }
        writeln!(w, r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#, (l + r) / 2.0, t - 15.0, escape(&self.title)).unwrap();
        writeln!(w, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (l + r) / 2.0, HEIGHT - 15.0, escape(&self.x_label)).unwrap();
        writeln!(
            w,
            r#"<text x="20" y="{0}" text-anchor="middle" transform="rotate(-90 20 {0})">{1}</text>"#,
            (t + b) / 2.0,
            escape(&self.y_label)
        )
        .unwrap();

        let visible = |y: f64| y.is_finite() && (!f.log_y || y > 0.0);
        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[series.color % PALETTE.len()];
            let pts: Vec<(f64, f64)> = series
                .points
                .iter()
                .filter(|p| p.0.is_finite() && visible(p.1))
                .map(|&(x, y)| (f.px(x), f.py(y)))
                .collect();
            match series.style {
                Style::Line | Style::Dashed => {
                    let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                    let dash = if series.style == Style::Dashed { r#" stroke-dasharray="6 4""# } else { "" };
                    writeln!(w, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#, path.join(" ")).unwrap();
                }
                Style::Markers => {
                    for (x, y) in &pts {
                        writeln!(w, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="none" stroke="{color}"/>"#).unwrap();
                    }
                }
            }
            let ly = t + 10.0 + 18.0 * i as f64;
            let lx = r + 15.0;
            match series.style {
                Style::Markers => {
                    writeln!(w, r#"<circle cx="{}" cy="{ly}" r="3" fill="none" stroke="{color}"/>"#, lx + 12.0).unwrap()
                }
                _ => writeln!(w, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="1.5"/>"#, lx + 24.0).unwrap(),
            }
            writeln!(w, r#"<text x="{}" y="{}">{}</text>"#, lx + 30.0, ly + 4.0, escape(&series.label)).unwrap();
        }
        writeln!(w, "</svg>").unwrap();
        s
    }
}
