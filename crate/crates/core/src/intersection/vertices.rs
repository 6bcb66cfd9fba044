//! Vertices of the intersection: points on both amoeba boundaries.

use std::f64::consts::TAU;

use serde::Serialize;

use super::contour::contour_crossings;
use crate::amoeba::{order_at, raster_amoeba_with, AmoebaRaster, RasterOptions, DEFAULT_TRIALS};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::laurent::LaurentPolynomial;

/// Half-width in coarse cells of the refinement patch (a 6x6-cell patch).
pub const PATCH_HALF_CELLS: f64 = 3.0;
/// Probe ring radius in coarse cells.
pub const PROBE_RADIUS: f64 = 2.0;
pub const PROBE_COUNT: usize = 16;

/// Stacked orders `ord_1(p)`, `ord_2(p)` of the complement components adjacent to a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OrderMatrix {
    pub rows: [[i64; 2]; 2],
}

impl OrderMatrix {
    pub fn flatten(&self) -> [i64; 4] {
        [self.rows[0][0], self.rows[0][1], self.rows[1][0], self.rows[1][1]]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntersectionVertex {
    pub location: [f64; 2],
    pub order_matrix: OrderMatrix,
    /// Raster complement component adjacent to the vertex, per amoeba.
    pub adjacent_component_ids: [Option<u32>; 2],
    /// Intersection component the vertex belongs to.
    pub component: Option<u32>,
}

/// A candidate that failed the probe test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RejectedVertex {
    pub location: [f64; 2],
    pub reason: String,
    #[serde(skip)]
    pub error: Error,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtractOptions {
    /// Candidates closer than this many cells are merged.
    pub merge_radius: f64,
    /// Resolution factor of the refinement patch; 1 disables refinement.
    pub refine_factor: usize,
    /// Options used to re-raster the refinement patches.
    pub raster: RasterOptions,
    /// Dilation applied to each amoeba in cells (degenerate mode).
    pub fatten: [usize; 2],
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions { merge_radius: 3.0, refine_factor: 4, raster: RasterOptions::default(), fatten: [0, 0] }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct VertexExtraction {
    pub vertices: Vec<IntersectionVertex>,
    pub rejected: Vec<RejectedVertex>,
    pub candidates: usize,
}

impl VertexExtraction {
    /// Fails with the first rejection, if any.
    pub fn into_result(self) -> Result<Vec<IntersectionVertex>> {
        match self.rejected.into_iter().next() {
            Some(r) => Err(r.error),
            None => Ok(self.vertices),
        }
    }
}

/// Single-linkage clusters of points closer than `radius`, as cluster means.
pub fn merge_points(points: &[[f64; 2]], radius: f64) -> Vec<[f64; 2]> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    // sort by x so only nearby pairs are compared
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| points[a][0].total_cmp(&points[b][0]).then(a.cmp(&b)));
    let r2 = radius * radius;
    for (k, &a) in order.iter().enumerate() {
        for &b in &order[k + 1..] {
            if points[b][0] - points[a][0] >= radius {
                break;
            }
            let d = (points[a][0] - points[b][0]).powi(2) + (points[a][1] - points[b][1]).powi(2);
            if d < r2 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut sums: std::collections::BTreeMap<usize, ([f64; 2], usize)> = Default::default();
    for k in 0..n {
        let r = find(&mut parent, k);
        let e = sums.entry(r).or_insert(([0.0, 0.0], 0));
        e.0[0] += points[k][0];
        e.0[1] += points[k][1];
        e.1 += 1;
    }
    sums.into_values().map(|(s, c)| [s[0] / c as f64, s[1] / c as f64]).collect()
}

fn refine(p: [f64; 2], r1: &AmoebaRaster, f: [&LaurentPolynomial; 2], opts: &ExtractOptions) -> [f64; 2] {
    if opts.refine_factor <= 1 {
        return p;
    }
    let w = r1.window;
    let Ok(patch) = w.patch(p, PATCH_HALF_CELLS, opts.refine_factor) else { return p };
    let mut masks = Vec::with_capacity(2);
    for k in 0..2 {
        let ro = RasterOptions { exec: Exec::Sequential, fatten: opts.fatten[k] * opts.refine_factor, ..opts.raster };
        match raster_amoeba_with(f[k], &patch, &ro) {
            Ok(r) => masks.push(r.membership),
            Err(_) => return p,
        }
    }
    let limit = 1.5 * w.cell_size();
    contour_crossings(&patch, &masks[0], &masks[1])
        .into_iter()
        .map(|q| ((q[0] - p[0]).hypot(q[1] - p[1]), q))
        .filter(|(d, _)| *d <= limit)
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1[0].total_cmp(&b.1[0])).then(a.1[1].total_cmp(&b.1[1])))
        .map_or(p, |(_, q)| q)
}

/// The unique order seen on a ring of probes around `p` outside the amoeba,
/// with the raster component of the first probe that saw it.
fn probe(p: [f64; 2], r: &AmoebaRaster, f: &LaurentPolynomial, amoeba: usize) -> Result<([i64; 2], Option<u32>)> {
    let w = &r.window;
    let rad = PROBE_RADIUS * w.cell_size();
    let mut found: Vec<([i64; 2], Option<u32>)> = Vec::new();
    let mut outside = 0usize;
    for k in 0..PROBE_COUNT {
        let t = TAU * (k as f64 + 0.5) / PROBE_COUNT as f64;
        let q = [p[0] + rad * t.cos(), p[1] + rad * t.sin()];
        if r.member_at(q) != Some(false) {
            continue;
        }
        outside += 1;
        if let Ok(o) = order_at(f, q, DEFAULT_TRIALS) {
            if !found.iter().any(|(x, _)| *x == o) {
                found.push((o, r.component_at(q)));
            }
        }
    }
    match found.len() {
        1 => Ok(found[0]),
        0 if outside == 0 => Err(Error::VertexSwallowed(amoeba)),
        0 => Err(Error::NearAmoeba(format!("no probe around ({:.4}, {:.4}) has a resolvable order", p[0], p[1]))),
        _ => {
            let list: Vec<String> = found.iter().map(|(o, _)| format!("{o:?}")).collect();
            Err(Error::GenericityViolated(format!(
                "point ({:.4}, {:.4}) is adjacent to complement components of orders {}",
                p[0],
                p[1],
                list.join(", ")
            )))
        }
    }
}

/// Boundary crossings of two labelled rasters, merged, refined and probed.
pub fn extract_vertices(
    r1: &AmoebaRaster,
    r2: &AmoebaRaster,
    f1: &LaurentPolynomial,
    f2: &LaurentPolynomial,
    opts: &ExtractOptions,
) -> Result<VertexExtraction> {
    if !r1.window.same_grid(&r2.window) {
        return Err(Error::WindowMismatch);
    }
    let w = r1.window;
    let raw = contour_crossings(&w, &r1.membership, &r2.membership);
    let merged = merge_points(&raw, opts.merge_radius * w.cell_size());
    let results = opts.raster.exec.map(merged.len(), |k| {
        let p = refine(merged[k], r1, [f1, f2], opts);
        let a = probe(p, r1, f1, 1);
        let b = probe(p, r2, f2, 2);
        (p, a, b)
    });
    let mut out = VertexExtraction { candidates: raw.len(), ..Default::default() };
    for (p, a, b) in results {
        match (a, b) {
            (Ok((o1, c1)), Ok((o2, c2))) => out.vertices.push(IntersectionVertex {
                location: p,
                order_matrix: OrderMatrix { rows: [o1, o2] },
                adjacent_component_ids: [c1, c2],
                component: None,
            }),
            (Err(e), _) | (_, Err(e)) => {
                log::warn!("vertex candidate at ({:.4}, {:.4}) rejected: {e}", p[0], p[1]);
                out.rejected.push(RejectedVertex { location: p, reason: e.to_string(), error: e });
            }
        }
    }
    Ok(out)
}
