//! Minimal SVG output: three-band group-velocity maps and line plots.

use std::fmt::Write as _;

use crate::qldrp::{band, Band, GvpMap};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

pub const COLOR_LOW: &str = "#3b6fb6";
pub const COLOR_GVP: &str = "#4caf50";
pub const COLOR_HIGH: &str = "#d9534f";

const LINE_COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn band_color(b: Band) -> &'static str {
    match b {
        Band::Low => COLOR_LOW,
        Band::Gvp => COLOR_GVP,
        Band::High => COLOR_HIGH,
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - 2.0 * MARGIN)
    }

    fn axes(&self, out: &mut String, xlabel: &str, ylabel: &str) {
        let (l, r) = (MARGIN, WIDTH - MARGIN);
        let (t, b) = (MARGIN, HEIGHT - MARGIN);
        let _ = writeln!(
            out,
            r#"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            r - l,
            b - t
        );
        for i in 0..=4 {
            let f = i as f64 / 4.0;
            let xv = self.x.0 + f * (self.x.1 - self.x.0);
            let yv = self.y.0 + f * (self.y.1 - self.y.0);
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#,
                self.px(xv),
                b + 16.0,
                tick(xv)
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{:.1}" text-anchor="end">{}</text>"#,
                l - 6.0,
                self.py(yv) + 4.0,
                tick(yv)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 16.0,
            escape(xlabel)
        );
        let _ = writeln!(
            out,
            r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(ylabel)
        );
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Band map with `kappa` horizontal and `omega dt` vertical. Adjacent cells of
/// the same band in a row are merged into one rectangle.
pub fn band_map(map: &GvpMap, title: &str) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let nk = map.kappa_axis.len();
    let no = map.omega_dt_axis.len();
    let frame = Frame {
        x: (0.0, *map.kappa_axis.last().unwrap_or(&1.0)),
        y: (0.0, *map.omega_dt_axis.last().unwrap_or(&1.0)),
    };
    let cell_w = (WIDTH - 2.0 * MARGIN) / nk as f64;
    let cell_h = (HEIGHT - 2.0 * MARGIN) / no as f64;
    for (i, row) in map.rows().enumerate() {
        let y = HEIGHT - MARGIN - (i + 1) as f64 * cell_h;
        let mut j = 0;
        while j < nk {
            let b = band(row[j]);
            let start = j;
            while j < nk && band(row[j]) == b {
                j += 1;
            }
            let _ = writeln!(
                out,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
                MARGIN + start as f64 * cell_w,
                y,
                (j - start) as f64 * cell_w,
                cell_h,
                band_color(b)
            );
        }
    }
    frame.axes(&mut out, "kappa = k dx", "omega dt");
    let legend = [
        (COLOR_LOW, "below 0.95"),
        (COLOR_GVP, "0.95 to 1.05"),
        (COLOR_HIGH, "above 1.05"),
    ];
    for (i, (color, label)) in legend.iter().enumerate() {
        let x = MARGIN + i as f64 * 150.0;
        let _ = writeln!(out, r#"<rect x="{x}" y="34" width="12" height="12" fill="{color}"/>"#);
        let _ = writeln!(out, r#"<text x="{}" y="45">{label}</text>"#, x + 16.0);
    }
    out.push_str("</svg>\n");
    out
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

/// Line plot of one or more series on shared axes.
pub fn line_plot(series: &[Series], title: &str, xlabel: &str, ylabel: &str) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let finite = |v: &f64| v.is_finite();
    let xs = series.iter().flat_map(|s| s.xs.iter().copied()).filter(finite);
    let ys = series.iter().flat_map(|s| s.ys.iter().copied()).filter(finite);
    let span = |it: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = it.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi - lo < 1e-12 {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo, hi)
        }
    };
    let frame = Frame {
        x: span(&mut { xs }),
        y: span(&mut { ys }),
    };
    frame.axes(&mut out, xlabel, ylabel);
    for (i, s) in series.iter().enumerate() {
        let color = LINE_COLORS[i % LINE_COLORS.len()];
        let pts: Vec<String> = s
            .xs
            .iter()
            .zip(&s.ys)
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(&x, &y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = MARGIN + 16.0 + 16.0 * i as f64;
        let lx = WIDTH - MARGIN - 140.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="2"/>"#,
            ly - 4.0,
            lx + 20.0,
            ly - 4.0
        );
        let _ = writeln!(out, r#"<text x="{}" y="{ly}">{}</text>"#, lx + 26.0, escape(&s.label));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adr::KprimeSource;
    use crate::qldrp::{default_axis, GvpMapMeta};
    use crate::timeint::TimeKind;

    #[test]
    fn band_map_merges_runs() {
        let map = GvpMap {
            kappa_axis: default_axis(4),
            omega_dt_axis: default_axis(2),
            values: vec![0.5, 0.5, 1.0, 2.0, 1.0, 1.0, 1.0, 1.0],
            meta: GvpMapMeta {
                scheme: "upw5".into(),
                time: TimeKind::Rk4,
                sigma: 0.01,
                source: KprimeSource::Analytic,
                table_nx: 8,
            },
        };
        let svg = band_map(&map, "a < b");
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("a &lt; b"));
        // 3 runs in row 0, 1 run in row 1, 3 legend swatches, background
        assert_eq!(svg.matches("<rect").count(), 4 + 3 + 1 + 1);
    }

    #[test]
    fn line_plot_has_one_polyline_per_series() {
        let s = Series {
            label: "u".into(),
            xs: vec![0.0, 1.0, 2.0],
            ys: vec![1.0, f64::NAN, 3.0],
        };
        let svg = line_plot(&[s.clone(), s], "t", "x", "y");
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(!svg.contains("NaN"));
    }
}
