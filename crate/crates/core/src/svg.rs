//! Minimal SVG 1.1 writer for amoeba figures.
//!
//! Coordinates are log-space points mapped into a fixed pixel box, `x2`
//! upward. Numbers are printed with three decimals so output is stable.

use std::fmt::Write;

use crate::amoeba::Window;
use crate::tropical::TropicalCurve;

pub const AMOEBA_COLORS: [&str; 2] = ["#3b6fb6", "#d9822b"];
pub const INTERSECTION_COLOR: &str = "#6a1b9a";

pub struct Figure {
    bounds: [f64; 4],
    scale: f64,
    width: f64,
    height: f64,
    body: String,
}

/// Part of the segment `a + t (b - a)`, `t` in `[t0, t1]`, inside `bounds`.
fn clip(a: [f64; 2], d: [f64; 2], mut t0: f64, mut t1: f64, bounds: [f64; 4]) -> Option<([f64; 2], [f64; 2])> {
    let checks = [(-d[0], a[0] - bounds[0]), (d[0], bounds[1] - a[0]), (-d[1], a[1] - bounds[2]), (d[1], bounds[3] - a[1])];
    for (p, q) in checks {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
            continue;
        }
        let r = q / p;
        if p < 0.0 {
            t0 = t0.max(r);
        } else {
            t1 = t1.min(r);
        }
        if t0 > t1 {
            return None;
        }
    }
    Some(([a[0] + t0 * d[0], a[1] + t0 * d[1]], [a[0] + t1 * d[0], a[1] + t1 * d[1]]))
}

/// Clips a segment to `[x_min, x_max, y_min, y_max]`.
pub fn clip_segment(a: [f64; 2], b: [f64; 2], bounds: [f64; 4]) -> Option<([f64; 2], [f64; 2])> {
    clip(a, [b[0] - a[0], b[1] - a[1]], 0.0, 1.0, bounds)
}

pub fn clip_ray(base: [f64; 2], dir: [f64; 2], bounds: [f64; 4]) -> Option<([f64; 2], [f64; 2])> {
    clip(base, dir, 0.0, f64::INFINITY, bounds)
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

impl Figure {
    /// Figure of `[x_min, x_max, y_min, y_max]` whose longer side is `size` pixels.
    pub fn new(bounds: [f64; 4], size: f64) -> Self {
        let (w, h) = (bounds[1] - bounds[0], bounds[3] - bounds[2]);
        let scale = size / w.max(h);
        Figure { bounds, scale, width: w * scale, height: h * scale, body: String::new() }
    }

    pub fn for_window(w: &Window, size: f64) -> Self {
        Self::new([w.x_min, w.x_max, w.y_min, w.y_max], size)
    }

    pub fn bounds(&self) -> [f64; 4] {
        self.bounds
    }

    fn px(&self, p: [f64; 2]) -> (f64, f64) {
        ((p[0] - self.bounds[0]) * self.scale, (self.bounds[3] - p[1]) * self.scale)
    }

    pub fn comment(&mut self, text: &str) {
        let _ = writeln!(self.body, "<!-- {} -->", text.replace("--", "- -"));
    }

    /// One rectangle per horizontal run of set cells.
    pub fn cells(&mut self, class: &str, fill: &str, opacity: f64, w: &Window, mask: &[bool]) {
        let _ = writeln!(self.body, "<g class=\"{class}\" fill=\"{fill}\" fill-opacity=\"{opacity}\" stroke=\"none\">");
        let (dx, dy) = (w.dx(), w.dy());
        for j in 0..w.ny {
            let mut i = 0;
            while i < w.nx {
                if !mask[w.index(i, j)] {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < w.nx && mask[w.index(i, j)] {
                    i += 1;
                }
                let (x0, y0) = self.px([w.x_min + start as f64 * dx, w.y_min + (j + 1) as f64 * dy]);
                let _ = writeln!(
                    self.body,
                    "<rect x=\"{x0:.3}\" y=\"{y0:.3}\" width=\"{:.3}\" height=\"{:.3}\"/>",
                    (i - start) as f64 * dx * self.scale,
                    dy * self.scale
                );
            }
        }
        self.body.push_str("</g>\n");
    }

    #[allow(clippy::too_many_arguments)]
    pub fn line(&mut self, class: &str, stroke: &str, width: f64, dash: Option<&str>, a: [f64; 2], b: [f64; 2], extra: &str) {
        let Some((a, b)) = clip_segment(a, b, self.bounds) else { return };
        self.raw_line(class, stroke, width, dash, a, b, extra);
    }

    #[allow(clippy::too_many_arguments)]
    fn raw_line(&mut self, class: &str, stroke: &str, width: f64, dash: Option<&str>, a: [f64; 2], b: [f64; 2], extra: &str) {
        let (x1, y1) = self.px(a);
        let (x2, y2) = self.px(b);
        let dash = dash.map(|d| format!(" stroke-dasharray=\"{d}\"")).unwrap_or_default();
        let _ = writeln!(
            self.body,
            "<line class=\"{class}\" x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"{stroke}\" stroke-width=\"{width}\"{dash}{extra}/>"
        );
    }

    /// Edges and rays of a tropical curve; rays carry `class="ray"` and their
    /// primitive direction.
    pub fn curve(&mut self, class: &str, stroke: &str, dash: Option<&str>, c: &TropicalCurve) {
        let _ = writeln!(self.body, "<g class=\"{class}\">");
        for e in &c.edges {
            let extra = format!(" data-weight=\"{}\"", e.weight);
            self.line("edge", stroke, 1.5, dash, c.vertices[e.from], c.vertices[e.to], &extra);
        }
        for r in &c.rays {
            let d = [r.direction[0] as f64, r.direction[1] as f64];
            if let Some((a, b)) = clip_ray(r.base, d, self.bounds) {
                let extra = format!(" data-direction=\"{} {}\" data-weight=\"{}\"", r.direction[0], r.direction[1], r.weight);
                self.raw_line("ray", stroke, 1.5, dash, a, b, &extra);
            }
        }
        for v in &c.vertices {
            if self.contains(*v) {
                self.dot("curve-vertex", *v, 2.0, stroke, None);
            }
        }
        self.body.push_str("</g>\n");
    }

    fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.bounds[0] && p[0] <= self.bounds[1] && p[1] >= self.bounds[2] && p[1] <= self.bounds[3]
    }

    pub fn polygon(&mut self, class: &str, stroke: &str, fill: &str, pts: &[[f64; 2]]) {
        if pts.is_empty() {
            return;
        }
        let list: Vec<String> = pts
            .iter()
            .map(|p| {
                let (x, y) = self.px(*p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            self.body,
            "<polygon class=\"{class}\" points=\"{}\" stroke=\"{stroke}\" stroke-width=\"1.5\" fill=\"{fill}\"/>",
            list.join(" ")
        );
    }

    pub fn dot(&mut self, class: &str, p: [f64; 2], r: f64, fill: &str, title: Option<&str>) {
        let (x, y) = self.px(p);
        match title {
            Some(t) => {
                let _ = writeln!(
                    self.body,
                    "<circle class=\"{class}\" cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{r}\" fill=\"{fill}\"><title>{}</title></circle>",
                    esc(t)
                );
            }
            None => {
                let _ = writeln!(self.body, "<circle class=\"{class}\" cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{r}\" fill=\"{fill}\"/>");
            }
        }
    }

    pub fn label(&mut self, p: [f64; 2], text: &str) {
        let (x, y) = self.px(p);
        let _ = writeln!(self.body, "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"11\" font-family=\"sans-serif\">{}</text>", x + 4.0, y - 4.0, esc(text));
    }

    pub fn finish(self) -> String {
        let mut s = String::new();
        s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.3} {h:.3}\">",
            w = self.width,
            h = self.height
        );
        let _ = writeln!(s, "<rect class=\"background\" x=\"0\" y=\"0\" width=\"{:.3}\" height=\"{:.3}\" fill=\"white\"/>", self.width, self.height);
        s.push_str(&self.body);
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clipping() {
        let b = [0.0, 1.0, 0.0, 1.0];
        let (p, q) = clip_ray([0.5, 0.5], [1.0, 0.0], b).unwrap();
        assert_eq!(p, [0.5, 0.5]);
        assert!((q[0] - 1.0).abs() < 1e-12);
        assert!(clip_ray([2.0, 0.5], [1.0, 0.0], b).is_none());
        let (p, q) = clip_segment([-1.0, -1.0], [2.0, 2.0], b).unwrap();
        assert!((p[0]).abs() < 1e-12 && (q[1] - 1.0).abs() < 1e-12);
        assert!(clip_segment([-1.0, 2.0], [2.0, 2.0], b).is_none());
    }

    #[test]
    fn run_length_rects() {
        let w = Window::square(0.0, 4.0, 4).unwrap();
        let mut m = vec![false; 16];
        m[w.index(0, 0)] = true;
        m[w.index(1, 0)] = true;
        m[w.index(3, 2)] = true;
        let mut f = Figure::for_window(&w, 40.0);
        f.cells("amoeba", "#000", 0.5, &w, &m);
        let s = f.finish();
        assert_eq!(s.matches("<rect x=").count(), 2);
        // the two-cell run at the bottom row spans 20 px and sits at y = 30
        assert!(s.contains("<rect x=\"0.000\" y=\"30.000\" width=\"20.000\" height=\"10.000\"/>"));
        assert!(s.starts_with("<?xml"));
        assert!(s.trim_end().ends_with("</svg>"));
    }
}
