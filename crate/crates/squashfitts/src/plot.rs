//! SVG scatter plots with a fitted trend line, and plain CSV point series.

use std::cmp::Ordering;
use std::fmt::Write as _;

use squashfitts_core::FigureSeries;

use crate::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct PlotStyle {
    pub width_px: u32,
    pub height_px: u32,
    pub margin_px: u32,
    pub point_radius_px: f64,
    pub x_label: String,
    pub y_label: String,
    /// Fraction of the data range the axes extend past the data on each side.
    pub axis_padding: f64,
}

impl Default for PlotStyle {
    fn default() -> Self {
        PlotStyle {
            width_px: 800,
            height_px: 600,
            margin_px: 70,
            point_radius_px: 4.0,
            x_label: "Index of Difficulty (bits)".to_string(),
            y_label: "Movement Time (s)".to_string(),
            axis_padding: 0.05,
        }
    }
}

impl PlotStyle {
    fn check(&self) -> Result<(), Error> {
        if self.width_px <= 2 * self.margin_px || self.height_px <= 2 * self.margin_px {
            return Err(Error::Style(
                "plot area (size minus margins) must be positive".into(),
            ));
        }
        if !self.point_radius_px.is_finite() || self.point_radius_px <= 0.0 {
            return Err(Error::Style("point radius must be positive".into()));
        }
        if !self.axis_padding.is_finite() || self.axis_padding < 0.0 {
            return Err(Error::Style("axis padding must be non-negative".into()));
        }
        Ok(())
    }
}

/// Affine map from data space onto the plot area, y pointing up.
///
/// The data bounds map exactly onto the plot area (the rectangle inside the
/// margins); the padded axes sit just outside it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotMapping {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub left: f64,
    pub top: f64,
    pub width: f64,
    pub height: f64,
}

impl PlotMapping {
    pub fn new(points: &[(f64, f64)], style: &PlotStyle) -> Result<Self, Error> {
        style.check()?;
        let (mut x_min, mut x_max, mut y_min, mut y_max) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for &(x, y) in points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
        if points.is_empty() {
            return Err(Error::Style("no points to plot".into()));
        }
        // Collapsed ranges still need a non-zero span.
        if x_max == x_min {
            x_min -= 0.5;
            x_max += 0.5;
        }
        if y_max == y_min {
            y_min -= 0.5;
            y_max += 0.5;
        }
        let m = style.margin_px as f64;
        Ok(PlotMapping {
            x_min,
            x_max,
            y_min,
            y_max,
            left: m,
            top: m,
            width: style.width_px as f64 - 2.0 * m,
            height: style.height_px as f64 - 2.0 * m,
        })
    }

    pub fn to_pixel(&self, x: f64, y: f64) -> (f64, f64) {
        let px = self.left + (x - self.x_min) / (self.x_max - self.x_min) * self.width;
        let py =
            self.top + self.height - (y - self.y_min) / (self.y_max - self.y_min) * self.height;
        (px, py)
    }

    pub fn to_data(&self, px: f64, py: f64) -> (f64, f64) {
        let x = self.x_min + (px - self.left) / self.width * (self.x_max - self.x_min);
        let y =
            self.y_min + (self.top + self.height - py) / self.height * (self.y_max - self.y_min);
        (x, y)
    }
}

/// Points sorted by ascending ID, ties by MT.
fn sorted_points(series: &FigureSeries) -> Vec<(f64, f64)> {
    let mut pts = series.points.clone();
    pts.sort_by(|a, b| match a.0.total_cmp(&b.0) {
        Ordering::Equal => a.1.total_cmp(&b.1),
        o => o,
    });
    pts
}

pub fn fit_comment(series: &FigureSeries) -> String {
    match &series.fit {
        Some(f) => format!(
            "# {} | fit: slope={} intercept={} r={} r_squared={} n={}",
            series.label, f.slope, f.intercept, f.pearson_r, f.r_squared, f.n
        ),
        None => format!("# {} | fit: degenerate", series.label),
    }
}

/// Two-column CSV `id_bits,mt_s` preceded by one `#` comment with the fit.
pub fn emit_series_csv(series: &FigureSeries) -> String {
    let mut out = fit_comment(series);
    out.push_str("\nid_bits,mt_s\n");
    for (x, y) in sorted_points(series) {
        let _ = writeln!(out, "{x},{y}");
    }
    out
}

fn nice_step(span: f64, target_ticks: usize) -> f64 {
    let raw = span / target_ticks as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.0 {
        2.0
    } else if norm < 7.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> (Vec<f64>, usize) {
    let step = nice_step(hi - lo, 5);
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    ((first..=last).map(|i| i as f64 * step).collect(), decimals)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Standalone SVG 1.1: framed axes with ticks, one `<circle>` per point,
/// and a single `<line>` for the fit across the observed ID range.
pub fn emit_svg(series: &FigureSeries, style: &PlotStyle) -> Result<String, Error> {
    let map = PlotMapping::new(&series.points, style)?;
    let pad_x = style.axis_padding * (map.x_max - map.x_min);
    let pad_y = style.axis_padding * (map.y_max - map.y_min);
    let (ax_lo, ax_hi) = (map.x_min - pad_x, map.x_max + pad_x);
    let (ay_lo, ay_hi) = (map.y_min - pad_y, map.y_max + pad_y);
    let (fx0, fy0) = map.to_pixel(ax_lo, ay_lo);
    let (fx1, fy1) = map.to_pixel(ax_hi, ay_hi);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = style.width_px,
        h = style.height_px
    );
    let _ = writeln!(s, "<title>{}</title>", escape(&series.label));
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#,
        style.width_px, style.height_px
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        style.width_px as f64 / 2.0,
        (map.top / 2.0).max(15.0),
        escape(&series.label)
    );

    // Axes frame and ticks as paths so `<line>` stays reserved for the fit.
    let _ = writeln!(
        s,
        r#"<path class="frame" d="M{fx0:.2},{fy1:.2} L{fx0:.2},{fy0:.2} L{fx1:.2},{fy0:.2}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    let (xt, xdec) = ticks(ax_lo, ax_hi);
    let (yt, ydec) = ticks(ay_lo, ay_hi);
    let mut tick_path = String::new();
    for &t in &xt {
        let (px, _) = map.to_pixel(t, ay_lo);
        let _ = write!(tick_path, "M{px:.2},{fy0:.2} L{px:.2},{:.2} ", fy0 + 5.0);
    }
    for &t in &yt {
        let (_, py) = map.to_pixel(ax_lo, t);
        let _ = write!(tick_path, "M{fx0:.2},{py:.2} L{:.2},{py:.2} ", fx0 - 5.0);
    }
    let _ = writeln!(
        s,
        r#"<path class="ticks" d="{}" stroke="black" stroke-width="1"/>"#,
        tick_path.trim_end()
    );
    for &t in &xt {
        let (px, _) = map.to_pixel(t, ay_lo);
        let _ = writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{t:.xdec$}</text>"#,
            fy0 + 18.0
        );
    }
    for &t in &yt {
        let (_, py) = map.to_pixel(ax_lo, t);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{t:.ydec$}</text>"#,
            fx0 - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
        map.left + map.width / 2.0,
        style.height_px as f64 - 12.0,
        escape(&style.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        map.top + map.height / 2.0,
        map.top + map.height / 2.0,
        escape(&style.y_label)
    );

    for (x, y) in sorted_points(series) {
        let (px, py) = map.to_pixel(x, y);
        let _ = writeln!(
            s,
            r#"<circle cx="{px:.2}" cy="{py:.2}" r="{}" fill="steelblue"/>"#,
            style.point_radius_px
        );
    }
    if let Some(fit) = &series.fit {
        let xs = series.points.iter().map(|p| p.0);
        let lo = xs.clone().fold(f64::INFINITY, f64::min);
        let hi = xs.fold(f64::NEG_INFINITY, f64::max);
        let (x1, y1) = map.to_pixel(lo, fit.predict(lo));
        let (x2, y2) = map.to_pixel(hi, fit.predict(hi));
        let _ = writeln!(
            s,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="crimson" stroke-width="2"/>"#
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
