//! Static SVG plots of μ traces.
//!
//! Top panel: μ markers with the lower/upper staircases. Bottom panel: the
//! staircase width against the `1/i` reference curve. Runs restart wherever
//! `i` stops increasing, and each run is drawn as its own polyline.

use std::fmt::Write as _;

use dss_core::Rational;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePoint {
    pub i: i64,
    pub mu: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Reads a trace CSV with header `i,mu,l,u[,one_over_i]` or `i,mu,lower,upper`.
pub fn parse_trace(text: &str) -> Result<Vec<TracePoint>, String> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let Some((_, header)) = lines.next() else {
        return Ok(Vec::new());
    };
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let find = |names: &[&str]| {
        cols.iter()
            .position(|c| names.contains(c))
            .ok_or_else(|| format!("trace header lacks any of {names:?}"))
    };
    let (ci, cmu, cl, cu) = (
        find(&["i"])?,
        find(&["mu"])?,
        find(&["l", "lower"])?,
        find(&["u", "upper"])?,
    );
    lines
        .map(|(n, line)| {
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            let get = |c: usize| -> Result<f64, String> {
                let cell = cells
                    .get(c)
                    .ok_or_else(|| format!("line {}: missing column", n + 1))?;
                cell.parse::<Rational>()
                    .map(Rational::to_f64)
                    .map_err(|e| format!("line {}: {e}", n + 1))
            };
            let i = cells
                .get(ci)
                .and_then(|c| c.parse::<i64>().ok())
                .filter(|&i| i >= 1)
                .ok_or_else(|| format!("line {}: bad distance", n + 1))?;
            Ok(TracePoint {
                i,
                mu: get(cmu)?,
                lower: get(cl)?,
                upper: get(cu)?,
            })
        })
        .collect()
}

const WIDTH: f64 = 640.0;
const PANEL_HEIGHT: f64 = 220.0;
const MARGIN: f64 = 48.0;

struct Panel {
    top: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Panel {
    fn new(top: f64, x_max: f64, values: impl Iterator<Item = f64>) -> Panel {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo < 1e-9 {
            (lo, hi) = (lo - 0.5, hi + 0.5);
        }
        Panel {
            top,
            x_max: x_max.max(1.0),
            y_min: lo,
            y_max: hi,
        }
    }

    fn x(&self, i: f64) -> f64 {
        MARGIN + i / self.x_max * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        self.top + PANEL_HEIGHT - (v - self.y_min) / (self.y_max - self.y_min) * PANEL_HEIGHT
    }

    fn axes(&self, out: &mut String, title: &str) {
        let (x0, x1) = (self.x(0.0), self.x(self.x_max));
        let (yt, yb) = (self.top, self.top + PANEL_HEIGHT);
        writeln!(
            out,
            r##"<rect x="{x0:.2}" y="{yt:.2}" width="{:.2}" height="{PANEL_HEIGHT:.2}" fill="none" stroke="#444"/>"##,
            x1 - x0
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{x0:.2}" y="{:.2}" font-size="12">{title}</text>"#,
            yt - 6.0
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="4" y="{:.2}" font-size="10">{:.3}</text>"#,
            yt + 10.0,
            self.y_max
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="4" y="{yb:.2}" font-size="10">{:.3}</text>"#,
            self.y_min
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{x1:.2}" y="{:.2}" font-size="10" text-anchor="end">i = {}</text>"#,
            yb + 14.0,
            self.x_max
        )
        .unwrap();
    }

    fn polyline(&self, out: &mut String, pts: &[(f64, f64)], color: &str, dashed: bool) {
        if pts.is_empty() {
            return;
        }
        let coords: Vec<String> = pts
            .iter()
            .map(|&(i, v)| format!("{:.2},{:.2}", self.x(i), self.y(v)))
            .collect();
        let dash = if dashed {
            r#" stroke-dasharray="4 3""#
        } else {
            ""
        };
        writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.2"{dash}/>"#,
            coords.join(" ")
        )
        .unwrap();
    }
}

fn runs(trace: &[TracePoint]) -> Vec<&[TracePoint]> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=trace.len() {
        if k == trace.len() || trace[k].i <= trace[k - 1].i {
            out.push(&trace[start..k]);
            start = k;
        }
    }
    out.retain(|r| !r.is_empty());
    out
}

fn staircase(run: &[TracePoint], value: impl Fn(&TracePoint) -> f64) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(run.len() * 2);
    for t in run {
        let v = value(t);
        pts.push((t.i as f64 - 1.0, v));
        pts.push((t.i as f64, v));
    }
    pts
}

/// Renders the trace. Output depends only on the input.
pub fn render_svg(trace: &[TracePoint]) -> String {
    let x_max = trace.iter().map(|t| t.i).max().unwrap_or(1) as f64;
    let top = Panel::new(
        MARGIN,
        x_max,
        trace.iter().flat_map(|t| [t.mu, t.lower, t.upper]),
    );
    let bottom = Panel::new(
        2.0 * MARGIN + PANEL_HEIGHT,
        x_max,
        trace
            .iter()
            .flat_map(|t| [t.upper - t.lower, 1.0 / t.i as f64])
            .chain([0.0]),
    );
    let height = 3.0 * MARGIN + 2.0 * PANEL_HEIGHT;

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    top.axes(&mut out, "slope mu(i) with lower/upper envelope");
    bottom.axes(&mut out, "envelope width u(i) - l(i) against 1/i");

    for run in runs(trace) {
        top.polyline(&mut out, &staircase(run, |t| t.lower), "#1f77b4", false);
        top.polyline(&mut out, &staircase(run, |t| t.upper), "#d62728", false);
        bottom.polyline(
            &mut out,
            &staircase(run, |t| t.upper - t.lower),
            "#2ca02c",
            false,
        );
        let reference: Vec<_> = run.iter().map(|t| (t.i as f64, 1.0 / t.i as f64)).collect();
        bottom.polyline(&mut out, &reference, "#7f7f7f", true);
    }
    for t in trace {
        writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="black"/>"#,
            top.x(t.i as f64),
            top.y(t.mu)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
