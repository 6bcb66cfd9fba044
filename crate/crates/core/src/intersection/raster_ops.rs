use serde::Serialize;

use crate::amoeba::{connected_components, AmoebaRaster, Window};
use crate::error::{Error, Result};

/// Cells of one connected component of the intersection.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentCells {
    pub id: u32,
    #[serde(skip)]
    pub cells: Vec<usize>,
    pub cell_count: usize,
    /// Touches the window edge, so boundedness cannot be seen in this window.
    pub unbounded_in_window: bool,
    /// Cells whose eight neighbours all belong to the intersection.
    pub interior_cells: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionGrid {
    pub window: Window,
    pub cells: Vec<bool>,
    pub component_id: Vec<Option<u32>>,
    pub components: Vec<ComponentCells>,
}

/// Cellwise AND of two rasters on the same grid and its 4-connected components.
pub fn intersect_rasters(r1: &AmoebaRaster, r2: &AmoebaRaster) -> Result<IntersectionGrid> {
    if !r1.window.same_grid(&r2.window) {
        return Err(Error::WindowMismatch);
    }
    let w = r1.window;
    let cells: Vec<bool> = r1.membership.iter().zip(&r2.membership).map(|(a, b)| *a && *b).collect();
    let (component_id, comps) = connected_components(&w, &cells);
    let components = comps
        .into_iter()
        .enumerate()
        .map(|(k, cells_k)| {
            let unbounded_in_window = cells_k.iter().any(|&c| {
                let (i, j) = w.coords(c);
                w.on_edge(i, j)
            });
            let interior_cells = cells_k.iter().filter(|&&c| is_interior(&w, &cells, c)).count();
            ComponentCells { id: k as u32, cell_count: cells_k.len(), cells: cells_k, unbounded_in_window, interior_cells }
        })
        .collect();
    Ok(IntersectionGrid { window: w, cells, component_id, components })
}

fn is_interior(w: &Window, mask: &[bool], c: usize) -> bool {
    let (i, j) = w.coords(c);
    if w.on_edge(i, j) {
        return false;
    }
    (j - 1..=j + 1).all(|b| (i - 1..=i + 1).all(|a| mask[w.index(a, b)]))
}

impl IntersectionGrid {
    pub fn component_at(&self, p: [f64; 2]) -> Option<u32> {
        let (i, j) = self.window.cell_of(p)?;
        self.component_id[self.window.index(i, j)]
    }

    /// Component owning a cell within Chebyshev distance `radius` of `p`, nearest first.
    pub fn component_near(&self, p: [f64; 2], radius: usize) -> Option<u32> {
        let w = &self.window;
        let (ci, cj) = w.cell_of(p)?;
        let mut best: Option<(f64, u32)> = None;
        let r = radius as i64;
        for dj in -r..=r {
            for di in -r..=r {
                let (a, b) = (ci as i64 + di, cj as i64 + dj);
                if a < 0 || b < 0 || a as usize >= w.nx || b as usize >= w.ny {
                    continue;
                }
                if let Some(id) = self.component_id[w.index(a as usize, b as usize)] {
                    let c = w.center(a as usize, b as usize);
                    let d = (c[0] - p[0]).powi(2) + (c[1] - p[1]).powi(2);
                    if best.is_none_or(|(bd, bid)| d < bd || (d == bd && id < bid)) {
                        best = Some((d, id));
                    }
                }
            }
        }
        best.map(|(_, id)| id)
    }
}
