//! Minimal line plots: fixed 800×600 viewport, two axes, one polyline per
//! curve.

use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: impl IntoIterator<Item = (f64, f64)>) -> Self {
        Self { label: label.into(), points: points.into_iter().collect() }
    }
}

fn bounds(series: &[Series]) -> (f64, f64, f64, f64) {
    let mut x = (f64::INFINITY, f64::NEG_INFINITY);
    let mut y = (0.0f64, f64::NEG_INFINITY);
    for &(px, py) in series.iter().flat_map(|s| &s.points) {
        x = (x.0.min(px), x.1.max(px));
        y = (y.0.min(py), y.1.max(py));
    }
    if !(x.0 < x.1) {
        x = (x.0.min(0.0), x.0.max(0.0) + 1.0);
    }
    if !(y.0 < y.1) {
        y.1 = y.0 + 1.0;
    }
    (x.0, x.1, y.0, y.1)
}

pub fn render(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let (x0, x1, y0, y1) = bounds(series);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);

    let mut svg = String::new();
    let w = &mut svg;
    let _ = writeln!(w, r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600" viewBox="0 0 800 600">"#);
    let _ = writeln!(w, r#"<rect width="800" height="600" fill="white"/>"#);
    let _ = writeln!(w, r#"<text x="400" y="30" text-anchor="middle" font-size="16">{}</text>"#, escape(title));
    let _ = writeln!(w, r#"<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>"#);
    let _ = writeln!(w, r#"<line x1="{left}" y1="{bottom}" x2="{left}" y2="{top}" stroke="black"/>"#);
    let _ = writeln!(w, r#"<text x="{left}" y="{}" text-anchor="middle" font-size="12">{x0:.3}</text>"#, bottom + 18.0);
    let _ = writeln!(w, r#"<text x="{right}" y="{}" text-anchor="middle" font-size="12">{x1:.3}</text>"#, bottom + 18.0);
    let _ = writeln!(w, r#"<text x="{}" y="{bottom}" text-anchor="end" font-size="12">{y0:.3}</text>"#, left - 6.0);
    let _ = writeln!(w, r#"<text x="{}" y="{}" text-anchor="end" font-size="12">{y1:.3}</text>"#, left - 6.0, top + 4.0);
    let _ = writeln!(w, r#"<text x="400" y="{}" text-anchor="middle" font-size="14">{}</text>"#, HEIGHT - 15.0, escape(x_label));
    let _ = writeln!(
        w,
        r#"<text x="18" y="300" text-anchor="middle" font-size="14" transform="rotate(-90 18 300)">{}</text>"#,
        escape(y_label)
    );
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(w, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, points.join(" "));
        let ly = top + 18.0 * i as f64;
        let _ = writeln!(w, r#"<text x="{}" y="{ly}" font-size="12" fill="{color}">{}</text>"#, right - 140.0, escape(&s.label));
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_polyline_per_series() {
        let a = Series::new("a", [(0.0, 0.0), (1.0, 1.0)]);
        let b = Series::new("b <c>", [(0.0, 1.0), (1.0, 0.5)]);
        let svg = render("t", "r", "density", &[a, b]);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("b &lt;c&gt;"));
        assert!(svg.contains(r#"viewBox="0 0 800 600""#));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn degenerate_ranges_do_not_produce_nan() {
        let svg = render("t", "x", "y", &[Series::new("flat", [(0.5, 1.0), (0.5, 1.0)])]);
        assert!(!svg.contains("NaN"));
    }
}
