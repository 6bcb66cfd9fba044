use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tropical::TropicalCurve;

/// Rectangular view of log-space split into `nx * ny` cells; cell `(i, j)`
/// has index `j * nx + i`, with `j` counting rows upward in `x2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        let w = Window { x_min, x_max, y_min, y_max, nx, ny };
        w.validate()?;
        Ok(w)
    }

    /// Square-celled helper: the same resolution along both axes.
    pub fn square(lo: f64, hi: f64, resolution: usize) -> Result<Self> {
        Self::new(lo, hi, lo, hi, resolution, resolution)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max].iter().all(|v| v.is_finite());
        if !finite || self.x_min >= self.x_max || self.y_min >= self.y_max {
            return Err(Error::InvalidWindow(format!(
                "bounds [{}, {}] x [{}, {}] are not increasing",
                self.x_min, self.x_max, self.y_min, self.y_max
            )));
        }
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::InvalidWindow("resolution must be positive".into()));
        }
        Ok(())
    }

    /// Bounding box of the curves padded by `pad` on every side.
    pub fn around_curves(curves: &[&TropicalCurve], pad: f64, resolution: usize) -> Result<Self> {
        let mut bb: Option<[f64; 4]> = None;
        for c in curves {
            if let Some(b) = c.bounding_box() {
                let acc = bb.get_or_insert(b);
                acc[0] = acc[0].min(b[0]);
                acc[1] = acc[1].max(b[1]);
                acc[2] = acc[2].min(b[2]);
                acc[3] = acc[3].max(b[3]);
            }
        }
        let b = bb.unwrap_or([0.0, 0.0, 0.0, 0.0]);
        Self::new(b[0] - pad, b[1] + pad, b[2] - pad, b[3] + pad, resolution, resolution)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / self.ny as f64
    }

    /// The larger of the two cell side lengths.
    pub fn cell_size(&self) -> f64 {
        self.dx().max(self.dy())
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }

    pub fn center(&self, i: usize, j: usize) -> [f64; 2] {
        [self.col_center(i), self.row_center(j)]
    }

    pub fn center_of(&self, idx: usize) -> [f64; 2] {
        let (i, j) = self.coords(idx);
        self.center(i, j)
    }

    pub fn col_center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    pub fn row_center(&self, j: usize) -> f64 {
        self.y_min + (j as f64 + 0.5) * self.dy()
    }

    /// Column containing `x`, if inside the window.
    pub fn col_of(&self, x: f64) -> Option<usize> {
        let t = (x - self.x_min) / self.dx();
        (t >= 0.0 && t < self.nx as f64).then_some(t as usize)
    }

    pub fn row_of(&self, y: f64) -> Option<usize> {
        let t = (y - self.y_min) / self.dy();
        (t >= 0.0 && t < self.ny as f64).then_some(t as usize)
    }

    pub fn cell_of(&self, p: [f64; 2]) -> Option<(usize, usize)> {
        Some((self.col_of(p[0])?, self.row_of(p[1])?))
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.x_min && p[0] <= self.x_max && p[1] >= self.y_min && p[1] <= self.y_max
    }

    pub fn on_edge(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i + 1 == self.nx || j + 1 == self.ny
    }

    /// 4-neighbours of a cell inside the window.
    pub fn neighbors4(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let (i, j) = self.coords(idx);
        let (nx, ny) = (self.nx, self.ny);
        [
            (i > 0).then(|| idx - 1),
            (i + 1 < nx).then(|| idx + 1),
            (j > 0).then(|| idx - nx),
            (j + 1 < ny).then(|| idx + nx),
        ]
        .into_iter()
        .flatten()
    }

    pub fn same_grid(&self, other: &Window) -> bool {
        self == other
    }

    /// Sub-window of `half_cells` cells around `p`, refined by `factor`.
    pub fn patch(&self, p: [f64; 2], half_cells: f64, factor: usize) -> Result<Window> {
        let (hx, hy) = (half_cells * self.dx(), half_cells * self.dy());
        let n = ((2.0 * half_cells).round() as usize).max(1) * factor;
        Window::new(p[0] - hx, p[0] + hx, p[1] - hy, p[1] + hy, n, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_of_cells() {
        let w = Window::square(-2.0, 2.0, 400).unwrap();
        assert!((w.dx() - 0.01).abs() < 1e-15);
        assert_eq!(w.cell_of([1.5, 1.5]), Some((350, 350)));
        assert_eq!(w.cell_of([2.5, 0.0]), None);
        let c = w.center(0, 0);
        assert!((c[0] + 1.995).abs() < 1e-12);
        assert_eq!(w.coords(w.index(7, 9)), (7, 9));
        assert_eq!(w.neighbors4(0).count(), 2);
    }

    #[test]
    fn invalid_windows() {
        assert!(Window::new(1.0, 0.0, 0.0, 1.0, 10, 10).is_err());
        assert!(Window::new(0.0, 1.0, 0.0, 1.0, 0, 10).is_err());
    }
}
