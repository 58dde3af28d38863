//! Minimal standalone SVG scatter and line charts.

use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 55.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

pub fn palette_color(index: usize) -> &'static str {
    PALETTE[index % PALETTE.len()]
}

struct Axes {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Axes {
    fn new(xs: impl Iterator<Item = f64>, ys: impl Iterator<Item = f64>) -> Axes {
        let mut a = Axes {
            x_min: f64::INFINITY,
            x_max: f64::NEG_INFINITY,
            y_min: f64::INFINITY,
            y_max: f64::NEG_INFINITY,
        };
        for x in xs {
            a.x_min = a.x_min.min(x);
            a.x_max = a.x_max.max(x);
        }
        for y in ys {
            a.y_min = a.y_min.min(y);
            a.y_max = a.y_max.max(y);
        }
        // degenerate ranges become unit boxes around the value
        if a.x_min == a.x_max {
            a.x_min -= 0.5;
            a.x_max += 0.5;
        }
        if a.y_min == a.y_max {
            a.y_min -= 0.5;
            a.y_max += 0.5;
        }
        a
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN_LEFT
            + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT
            - MARGIN_BOTTOM
            - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn open_svg(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
}

fn draw_axes(out: &mut String, axes: &Axes, x_label: &str, y_label: &str) {
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    let _ = writeln!(
        out,
        r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.2}" font-size="14" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
    // min/max tick labels
    let _ = writeln!(
        out,
        r#"<text x="{x0:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#,
        y0 + 16.0,
        format_tick(axes.x_min)
    );
    let _ = writeln!(
        out,
        r#"<text x="{x1:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#,
        y0 + 16.0,
        format_tick(axes.x_max)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{y0:.2}" font-size="11" text-anchor="end">{}</text>"#,
        x0 - 6.0,
        format_tick(axes.y_min)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
        x0 - 6.0,
        y1 + 4.0,
        format_tick(axes.y_max)
    );
}

fn format_tick(v: f64) -> String {
    if v == 0.0 || (v.abs() >= 0.01 && v.abs() < 100_000.0) {
        format!("{v:.3}")
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Scatter chart: one circle per point, colored by an optional class id.
pub fn scatter(points: &[(f64, f64, usize)], x_label: &str, y_label: &str) -> String {
    let axes = Axes::new(points.iter().map(|p| p.0), points.iter().map(|p| p.1));
    let mut out = String::new();
    open_svg(&mut out);
    draw_axes(&mut out, &axes, x_label, y_label);
    for &(x, y, class) in points {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}" fill-opacity="0.8"/>"#,
            axes.px(x),
            axes.py(y),
            palette_color(class)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Line chart: one polyline per named series over a shared x column.
pub fn lines(x: &[f64], series: &[(String, Vec<f64>)], x_label: &str) -> String {
    let axes = Axes::new(
        x.iter().copied(),
        series.iter().flat_map(|(_, ys)| ys.iter().copied()),
    );
    let mut out = String::new();
    open_svg(&mut out);
    draw_axes(&mut out, &axes, x_label, "value");
    for (idx, (name, ys)) in series.iter().enumerate() {
        let color = palette_color(idx);
        let mut path = String::new();
        for (&xv, &yv) in x.iter().zip(ys) {
            let _ = write!(path, "{:.2},{:.2} ", axes.px(xv), axes.py(yv));
        }
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"/>"#,
            path.trim_end()
        );
        // legend entry
        let ly = MARGIN_TOP + 16.0 * idx as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="3"/>"#,
            WIDTH - MARGIN_RIGHT - 130.0,
            WIDTH - MARGIN_RIGHT - 105.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12">{}</text>"#,
            WIDTH - MARGIN_RIGHT - 100.0,
            ly + 4.0,
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}
