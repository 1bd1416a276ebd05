//! Static SVG plots of curve bundles.
//!
//! Output is a pure function of the [`PlotSpec`]: coordinates are printed with
//! fixed precision so identical inputs give identical bytes.

use std::fmt::Write as _;

use crate::cost::CostLine;
use crate::decision::{Curve, Series};
use crate::error::{Error, Result};
use crate::isometrics::RocLine;

const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
];

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesData {
    Curve(Curve),
    CostLine(CostLine),
    RocLine(RocLine),
    /// Raw polyline, e.g. a ROC curve.
    Points(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axes {
    Decision,
    Cost,
    Roc,
}

impl SeriesData {
    fn axes(&self) -> Axes {
        match self {
            SeriesData::Curve(c) => match c.series {
                Series::Model | Series::TreatAll | Series::TreatNone | Series::UpperEnvelope => {
                    Axes::Decision
                }
                _ => Axes::Cost,
            },
            SeriesData::CostLine(_) => Axes::Cost,
            SeriesData::RocLine(_) | SeriesData::Points(_) => Axes::Roc,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Style {
    pub color: Option<String>,
    pub dashed: bool,
    pub stroke_width: f64,
}

impl Default for Style {
    fn default() -> Self {
        Self {
            color: None,
            dashed: false,
            stroke_width: 1.5,
        }
    }
}

impl Style {
    pub fn dashed() -> Self {
        Self {
            dashed: true,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub label: String,
    pub data: SeriesData,
    pub style: Style,
}

impl PlotSeries {
    pub fn new(label: impl Into<String>, data: SeriesData) -> Self {
        Self {
            label: label.into(),
            data,
            style: Style::default(),
        }
    }

    pub fn with_style(mut self, style: Style) -> Self {
        self.style = style;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<PlotSeries>,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub width: u32,
    pub height: u32,
}

impl PlotSpec {
    pub fn new(
        title: impl Into<String>,
        x_label: impl Into<String>,
        y_label: impl Into<String>,
    ) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
            x_range: (0.0, 1.0),
            y_range: (0.0, 1.0),
            width: 640,
            height: 480,
        }
    }

    pub fn with_series(mut self, series: PlotSeries) -> Self {
        self.series.push(series);
        self
    }

    pub fn with_ranges(mut self, x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        self.x_range = x_range;
        self.y_range = y_range;
        self
    }
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    left: f64,
    top: f64,
    w: f64,
    h: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        self.left + (x - self.x0) / (self.x1 - self.x0) * self.w
    }

    fn py(&self, y: f64) -> f64 {
        self.top + (self.y1 - y) / (self.y1 - self.y0) * self.h
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
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

/// Liang-Barsky clip of segment `p..q` to the axis box.
fn clip_segment(p: (f64, f64), q: (f64, f64), f: &Frame) -> Option<((f64, f64), (f64, f64))> {
    let (dx, dy) = (q.0 - p.0, q.1 - p.1);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for (den, num) in [
        (-dx, p.0 - f.x0),
        (dx, f.x1 - p.0),
        (-dy, p.1 - f.y0),
        (dy, f.y1 - p.1),
    ] {
        if den == 0.0 {
            if num < 0.0 {
                return None;
            }
        } else {
            let r = num / den;
            if den < 0.0 {
                lo = lo.max(r);
            } else {
                hi = hi.min(r);
            }
        }
    }
    (lo <= hi).then_some((
        (p.0 + lo * dx, p.1 + lo * dy),
        (p.0 + hi * dx, p.1 + hi * dy),
    ))
}

fn series_points(s: &PlotSeries, f: &Frame) -> Result<Vec<(f64, f64)>> {
    let line = |at: &dyn Fn(f64) -> f64| -> Vec<(f64, f64)> {
        clip_segment((f.x0, at(f.x0)), (f.x1, at(f.x1)), f)
            .map(|(a, b)| vec![a, b])
            .unwrap_or_default()
    };
    let pts = match &s.data {
        SeriesData::Curve(c) => c.points().collect(),
        SeriesData::Points(p) => p.clone(),
        SeriesData::CostLine(l) => line(&|x| l.at(x)),
        SeriesData::RocLine(l) => line(&|x| l.tpr_at(x)),
    };
    if let Some((x, _)) = pts.iter().find(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::Render(format!(
            "series {:?} has a non-finite value at x={x}",
            s.label
        )));
    }
    Ok(pts)
}

pub fn render_svg(spec: &PlotSpec) -> Result<String> {
    if spec.series.is_empty() {
        return Err(Error::Render("no series to plot".into()));
    }
    let (x0, x1) = spec.x_range;
    let (y0, y1) = spec.y_range;
    if !(x0.is_finite() && x1.is_finite() && y0.is_finite() && y1.is_finite())
        || x0 >= x1
        || y0 >= y1
    {
        return Err(Error::Render(format!(
            "invalid plot ranges x={:?} y={:?}",
            spec.x_range, spec.y_range
        )));
    }
    let axes = spec.series[0].data.axes();
    if let Some(s) = spec.series.iter().find(|s| s.data.axes() != axes) {
        return Err(Error::Render(format!(
            "series {:?} does not share the plot's axes",
            s.label
        )));
    }

    let (width, height) = (spec.width as f64, spec.height as f64);
    let frame = Frame {
        x0,
        x1,
        y0,
        y1,
        left: MARGIN_LEFT,
        top: MARGIN_TOP,
        w: (width - MARGIN_LEFT - MARGIN_RIGHT).max(10.0),
        h: (height - MARGIN_TOP - MARGIN_BOTTOM).max(10.0),
    };

    let mut svg = String::new();
    // write! into a String is infallible
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        spec.width, spec.height, spec.width, spec.height
    );
    let _ = writeln!(
        svg,
        r#"<defs><clipPath id="plot-area"><rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}"/></clipPath></defs>"#,
        frame.left, frame.top, frame.w, frame.h
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        frame.left + frame.w / 2.0,
        escape(&spec.title)
    );

    // axes and ticks
    let _ = writeln!(
        svg,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        frame.left, frame.top, frame.w, frame.h
    );
    for k in 0..=TICKS {
        let fx = x0 + (x1 - x0) * k as f64 / TICKS as f64;
        let fy = y0 + (y1 - y0) * k as f64 / TICKS as f64;
        let (px, py) = (frame.px(fx), frame.py(fy));
        let bottom = frame.top + frame.h;
        let _ = writeln!(
            svg,
            r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="#dddddd"/><text x="{px:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11">{fx:.2}</text>"##,
            frame.top,
            bottom,
            bottom + 16.0
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">{fy:.2}</text>"##,
            frame.left,
            frame.left + frame.w,
            frame.left - 6.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        frame.left + frame.w / 2.0,
        height - 10.0,
        escape(&spec.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 16 {:.2})">{}</text>"#,
        frame.top + frame.h / 2.0,
        frame.top + frame.h / 2.0,
        escape(&spec.y_label)
    );

    // series
    let _ = writeln!(svg, r#"<g clip-path="url(#plot-area)">"#);
    for (i, s) in spec.series.iter().enumerate() {
        let pts = series_points(s, &frame)?;
        let color = s
            .style
            .color
            .clone()
            .unwrap_or_else(|| PALETTE[i % PALETTE.len()].to_string());
        let mut path = String::new();
        for (j, (x, y)) in pts.iter().enumerate() {
            let _ = write!(
                path,
                "{}{:.2},{:.2}",
                if j == 0 { "M" } else { " L" },
                frame.px(*x),
                frame.py(*y)
            );
        }
        let dash = if s.style.dashed {
            r#" stroke-dasharray="6,4""#
        } else {
            ""
        };
        let _ = writeln!(
            svg,
            r#"<path d="{path}" fill="none" stroke="{}" stroke-width="{:.2}"{dash}><title>{}</title></path>"#,
            escape(&color),
            s.style.stroke_width,
            escape(&s.label)
        );
    }
    let _ = writeln!(svg, "</g>");

    // legend
    let lx = frame.left + frame.w + 12.0;
    let _ = writeln!(svg, r#"<g class="legend">"#);
    for (i, s) in spec.series.iter().enumerate() {
        let color = s
            .style
            .color
            .clone()
            .unwrap_or_else(|| PALETTE[i % PALETTE.len()].to_string());
        let ly = frame.top + 10.0 + 18.0 * i as f64;
        let dash = if s.style.dashed {
            r#" stroke-dasharray="6,4""#
        } else {
            ""
        };
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="2"{dash}/><text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">{}</text>"#,
            lx + 20.0,
            escape(&color),
            lx + 26.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}
