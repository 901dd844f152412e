//! Minimal static SVG charts: multi-series line charts and grouped bars.

use std::fmt::Write as _;

const WIDTH: f64 = 820.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Dashed horizontal reference line.
    pub reference: Option<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarChart {
    pub title: String,
    pub y_label: String,
    pub groups: Vec<String>,
    pub series: Vec<String>,
    /// `values[group][series]`
    pub values: Vec<Vec<f64>>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Roughly five round tick values covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    let exp = (span / 5.0).log10().floor() as i32;
    let mag = 10f64.powi(exp);
    let m = [1.0, 2.0, 5.0, 10.0].into_iter().find(|m| span / (m * mag) <= 6.0).unwrap_or(10.0);
    let step = m * mag;
    let first = (lo / step).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    // i * m / 10^-exp is correctly rounded, unlike repeated addition
    (first..=last)
        .map(|i| if exp >= 0 { i as f64 * step } else { i as f64 * m / 10f64.powi(-exp) })
        .collect()
}

fn label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn y_axis(out: &mut String, f: &Frame, y_label: &str) {
    let x0 = LEFT;
    let x1 = WIDTH - RIGHT;
    for t in ticks(f.y.0, f.y.1) {
        let y = f.py(t);
        let _ = writeln!(out, r##"<line x1="{x0}" y1="{y:.2}" x2="{x1}" y2="{y:.2}" stroke="#e0e0e0"/>"##);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 6.0,
            y + 4.0,
            label(t)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
    let _ = writeln!(
        out,
        r##"<rect x="{x0}" y="{TOP}" width="{}" height="{}" fill="none" stroke="#333"/>"##,
        x1 - x0,
        HEIGHT - TOP - BOTTOM
    );
}

fn legend(out: &mut String, names: &[String], dashed: Option<&str>) {
    let x = WIDTH - RIGHT + 15.0;
    for (i, name) in names.iter().enumerate() {
        let y = TOP + 10.0 + 20.0 * i as f64;
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(out, r#"<rect x="{x}" y="{}" width="14" height="10" fill="{color}"/>"#, y - 9.0);
        let _ = writeln!(out, r#"<text x="{}" y="{y}">{}</text>"#, x + 20.0, escape(name));
    }
    if let Some(name) = dashed {
        let y = TOP + 10.0 + 20.0 * names.len() as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{x}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-dasharray="5,3"/>"#,
            y - 4.0,
            x + 14.0,
            y - 4.0
        );
        let _ = writeln!(out, r#"<text x="{}" y="{y}">{}</text>"#, x + 20.0, escape(name));
    }
}

pub fn render_line_chart(chart: &LineChart) -> String {
    let all = chart.series.iter().flat_map(|s| s.points.iter());
    let (mut xlo, mut xhi, mut ylo, mut yhi) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all.filter(|(x, y)| x.is_finite() && y.is_finite()) {
        xlo = xlo.min(x);
        xhi = xhi.max(x);
        ylo = ylo.min(y);
        yhi = yhi.max(y);
    }
    if let Some((_, r)) = &chart.reference {
        ylo = ylo.min(*r);
        yhi = yhi.max(*r);
    }
    let xr = if xlo.is_finite() && xhi > xlo { (xlo, xhi) } else { padded(xlo, xhi) };
    let f = Frame { x: xr, y: padded(ylo, yhi) };

    let mut out = String::new();
    header(&mut out, &chart.title);
    y_axis(&mut out, &f, &chart.y_label);
    for t in ticks(f.x.0, f.x.1) {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            f.px(t),
            HEIGHT - BOTTOM + 18.0,
            label(t)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        HEIGHT - 15.0,
        escape(&chart.x_label)
    );
    if let Some((_, r)) = &chart.reference {
        let y = f.py(*r);
        let _ = writeln!(
            out,
            r#"<line x1="{LEFT}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="black" stroke-dasharray="5,3"/>"#,
            WIDTH - RIGHT
        );
    }
    for (i, s) in chart.series.iter().enumerate() {
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            PALETTE[i % PALETTE.len()],
            pts.join(" ")
        );
    }
    let names: Vec<String> = chart.series.iter().map(|s| s.name.clone()).collect();
    legend(&mut out, &names, chart.reference.as_ref().map(|(n, _)| n.as_str()));
    out.push_str("</svg>\n");
    out
}

pub fn render_bar_chart(chart: &BarChart) -> String {
    let vals = chart.values.iter().flatten().copied().filter(|v| v.is_finite());
    let (lo, hi) = vals.fold((0.0f64, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let (plo, phi) = padded(lo, hi);
    let f = Frame { x: (0.0, chart.groups.len().max(1) as f64), y: (if lo >= 0.0 { 0.0 } else { plo }, phi) };

    let mut out = String::new();
    header(&mut out, &chart.title);
    y_axis(&mut out, &f, &chart.y_label);
    let ns = chart.series.len().max(1) as f64;
    let group_w = f.px(1.0) - f.px(0.0);
    let bar_w = group_w * 0.8 / ns;
    let base = f.py(0.0f64.clamp(f.y.0, f.y.1));
    for (g, name) in chart.groups.iter().enumerate() {
        let gx = f.px(g as f64);
        for (s, &v) in chart.values.get(g).map(Vec::as_slice).unwrap_or(&[]).iter().enumerate() {
            if !v.is_finite() {
                continue;
            }
            let x = gx + group_w * 0.1 + bar_w * s as f64;
            let y = f.py(v);
            let _ = writeln!(
                out,
                r#"<rect class="bar" x="{x:.2}" y="{:.2}" width="{bar_w:.2}" height="{:.2}" fill="{}"/>"#,
                y.min(base),
                (y - base).abs(),
                PALETTE[s % PALETTE.len()]
            );
        }
        let _ = writeln!(
            out,
            r#"<text class="group" x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            gx + group_w / 2.0,
            HEIGHT - BOTTOM + 18.0,
            escape(name)
        );
    }
    legend(&mut out, &chart.series, None);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grouped_bars_layout() {
        let chart = BarChart {
            title: "bias".into(),
            y_label: "bias²".into(),
            groups: vec!["30000".into(), "60000".into(), "90000".into()],
            series: ["SE", "DE", "CDE", "AC-CDE", "Auto-AC-CDE"].map(String::from).to_vec(),
            values: vec![vec![1e-4, 2e-5, 3e-5, 1e-5, 5e-6]; 3],
        };
        let svg = render_bar_chart(&chart);
        assert_eq!(svg.matches(r#"class="bar""#).count(), 15);
        assert_eq!(svg.matches(r#"class="group""#).count(), 3);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn line_chart_has_one_polyline_per_series() {
        let chart = LineChart {
            title: "t".into(),
            x_label: "step".into(),
            y_label: "v".into(),
            series: vec![
                Series { name: "q".into(), points: vec![(1.0, 0.5), (2.0, 1.5)] },
                Series { name: "dq<".into(), points: vec![(1.0, -0.5), (2.0, f64::NAN)] },
            ],
            reference: Some(("V*".into(), 0.36)),
        };
        let svg = render_line_chart(&chart);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("dq&lt;"));
        assert!(svg.contains("stroke-dasharray"));
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn tick_values() {
        assert_eq!(ticks(0.0, 1.0), vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0]);
        assert_eq!(label(0.30000000000000004), "0.3");
        assert_eq!(label(-0.0), "0");
    }
}
