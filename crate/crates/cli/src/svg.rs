//! Standalone SVG plots. Exact values are converted to `f64` only here.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 50.0;

struct Canvas {
    x_range: (f64, f64),
    y_range: (f64, f64),
    body: String,
}

impl Canvas {
    fn new(title: &str, x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        let mut body = String::new();
        let _ = writeln!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(body, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            body,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            MARGIN / 2.0,
            escape(title)
        );
        let mut canvas = Canvas { x_range, y_range, body };
        canvas.axes();
        canvas
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x_range.0) / (self.x_range.1 - self.x_range.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y_range.0) / (self.y_range.1 - self.y_range.0) * (HEIGHT - 2.0 * MARGIN)
    }

    fn axes(&mut self) {
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        let path = format!(
            "M{:.2},{:.2} L{:.2},{:.2} L{:.2},{:.2}",
            self.px(x0),
            self.py(y1),
            self.px(x0),
            self.py(y0),
            self.px(x1),
            self.py(y0)
        );
        let _ = writeln!(self.body, r#"<path d="{path}" stroke="black" fill="none"/>"#);
        for (v, anchor_x, anchor_y, horizontal) in
            [(x0, self.px(x0), self.py(y0) + 18.0, true), (x1, self.px(x1), self.py(y0) + 18.0, true)]
                .into_iter()
                .chain([(y0, self.px(x0) - 8.0, self.py(y0), false), (y1, self.px(x0) - 8.0, self.py(y1), false)])
        {
            let anchor = if horizontal { "middle" } else { "end" };
            let _ = writeln!(
                self.body,
                r#"<text x="{anchor_x:.2}" y="{anchor_y:.2}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{}</text>"#,
                trim_float(v)
            );
        }
    }

    fn polyline(&mut self, points: &[(f64, f64)], color: &str) {
        let mut coords = String::with_capacity(points.len() * 16);
        for (x, y) in points {
            let _ = write!(coords, "{:.2},{:.2} ", self.px(*x), self.py(*y));
        }
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" stroke="{color}" stroke-width="1" fill="none"/>"#,
            coords.trim_end()
        );
    }

    fn hline(&mut self, y: f64, color: &str) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-dasharray="4 3"/>"#,
            self.px(self.x_range.0),
            self.py(y),
            self.px(self.x_range.1),
            self.py(y)
        );
    }

    /// Horizontal bar spanning `[x0, x1]` at height `y`.
    fn bar(&mut self, x0: f64, x1: f64, y: f64, color: &str) {
        let (a, b) = (self.px(x0), self.px(x1));
        let _ = writeln!(
            self.body,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="6" fill="{color}" fill-opacity="0.6"/>"#,
            a,
            self.py(y) - 3.0,
            (b - a).max(0.5)
        );
    }

    fn dot(&mut self, x: f64, y: f64, color: &str) {
        let _ = writeln!(self.body, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, self.px(x), self.py(y));
    }

    fn legend(&mut self, row: usize, text: &str, color: &str) {
        let y = MARGIN + 16.0 * row as f64;
        let x = WIDTH - MARGIN - 180.0;
        let _ = writeln!(self.body, r#"<rect x="{x:.2}" y="{:.2}" width="10" height="10" fill="{color}"/>"#, y - 9.0);
        let _ = writeln!(
            self.body,
            r#"<text x="{:.2}" y="{y:.2}" font-family="sans-serif" font-size="12">{}</text>"#,
            x + 14.0,
            escape(text)
        );
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn trim_float(v: f64) -> String {
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// `τ` on a dyadic grid, optionally marking one point.
pub fn graph(title: &str, grid: &[(f64, f64)], marker: Option<(f64, f64)>) -> String {
    let mut c = Canvas::new(title, (0.0, 1.0), (0.0, 0.7));
    c.polyline(grid, "steelblue");
    if let Some((x, y)) = marker {
        c.dot(x, y, "crimson");
    }
    c.finish()
}

/// Level-set cover: the graph, the level line, interval bars and confirmed points.
pub fn cover(title: &str, grid: &[(f64, f64)], level: f64, bars: &[(f64, f64)], points: &[f64]) -> String {
    let mut c = Canvas::new(title, (0.0, 1.0), (0.0, 0.7));
    c.polyline(grid, "lightsteelblue");
    c.hline(level, "gray");
    for (a, b) in bars {
        c.bar(*a, *b, level, "darkorange");
    }
    for x in points {
        c.dot(*x, level, "crimson");
    }
    c.legend(0, "possible intervals", "darkorange");
    c.legend(1, "confirmed points", "crimson");
    c.finish()
}

/// The singular function as a step polyline.
pub fn staircase(title: &str, grid: &[(f64, f64)]) -> String {
    let mut c = Canvas::new(title, (0.0, 1.0), (0.0, 1.0));
    c.polyline(grid, "seagreen");
    c.finish()
}

/// Dimension spectrum rows: `(r, gamma_dim, paper_bound, ordinate_bound)`.
pub fn dims(title: &str, rows: &[(f64, f64, f64, f64)]) -> String {
    let r_max = rows.iter().map(|r| r.0).fold(1.0, f64::max);
    let mut c = Canvas::new(title, (1.0, r_max), (0.0, 1.0));
    let series = |f: fn(&(f64, f64, f64, f64)) -> f64| -> Vec<(f64, f64)> {
        rows.iter().map(|row| (row.0, f(row).clamp(0.0, 1.0))).collect()
    };
    c.polyline(&series(|r| r.1), "steelblue");
    c.polyline(&series(|r| r.2), "darkorange");
    c.polyline(&series(|r| r.3), "gray");
    c.legend(0, "log2|X_2r| / 2r", "steelblue");
    c.legend(1, "1 - 2 ln r / r", "darkorange");
    c.legend(2, "1 - 2 ln r / 2r", "gray");
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documents_are_well_formed() {
        let grid = vec![(0.0, 0.0), (0.5, 0.5), (1.0, 0.0)];
        for doc in [
            graph("g", &grid, Some((0.5, 0.5))),
            cover("c", &grid, 0.5, &[(0.4, 0.6)], &[0.5]),
            staircase("s", &grid),
            dims("d", &[(1.0, 0.0, 1.0, 1.0), (2.0, 0.1, 0.3, 0.6)]),
        ] {
            assert!(doc.starts_with("<svg"));
            assert!(doc.trim_end().ends_with("</svg>"));
            assert!(doc.contains("<polyline"));
        }
    }
}
