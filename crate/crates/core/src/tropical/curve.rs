//! Tropical plane curves from the regular subdivision induced by the lift.
//!
//! Lifts are snapped to integers at a resolution of `1e-9` so the upper hull,
//! and with it the whole combinatorial structure, is computed exactly.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::TropicalPoly;
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, fan::primitive, Point2};

/// Lift values are multiplied by this and rounded before hulling.
pub const SNAP_SCALE: f64 = 1e9;

/// Bounded edge between two curve vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveEdge {
    pub from: usize,
    pub to: usize,
    /// Primitive direction pointing from `from` to `to`.
    pub direction: Point2,
    pub weight: u64,
    pub dual_edge: [Point2; 2],
}

/// Unbounded ray; `vertex` is `None` for the lines of a one-dimensional support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRay {
    pub vertex: Option<usize>,
    pub base: [f64; 2],
    pub direction: Point2,
    pub weight: u64,
    pub dual_edge: [Point2; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TropicalCurve {
    pub vertices: Vec<[f64; 2]>,
    pub edges: Vec<CurveEdge>,
    pub rays: Vec<CurveRay>,
    /// Vertices (counterclockwise) of the subdivision cell dual to each curve vertex.
    pub dual_cells: Vec<Vec<Point2>>,
}

fn lattice_length(a: Point2, b: Point2) -> u64 {
    (b[0] - a[0]).gcd(&(b[1] - a[1])) as u64
}

fn snap(b: f64) -> i128 {
    (b * SNAP_SCALE).round() as i128
}

type P3 = [i128; 3];

fn sub3(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross3(a: P3, b: P3) -> P3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot3(a: P3, b: P3) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize3(n: P3) -> P3 {
    let g = n[0].gcd(&n[1]).gcd(&n[2]);
    [n[0] / g, n[1] / g, n[2] / g]
}

/// Curve of a tropical polynomial with at least two support points.
pub fn tropical_curve(h: &TropicalPoly) -> Result<TropicalCurve> {
    let support = h.support();
    if support.len() < 2 {
        return Err(Error::DegenerateSupport("a single point"));
    }
    let hull = convex_hull(support)?;
    let lifted: Vec<P3> = h
        .terms()
        .map(|(a, b)| [a[0] as i128, a[1] as i128, snap(b)])
        .collect();
    if !hull.is_full_dimensional() {
        return Ok(collinear_curve(h, &lifted));
    }

    // upper facets, keyed by primitive normal with positive last coordinate
    let n = lifted.len();
    let mut facets: BTreeMap<P3, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut normal = cross3(sub3(lifted[j], lifted[i]), sub3(lifted[k], lifted[i]));
                if normal[2] == 0 {
                    continue;
                }
                if normal[2] < 0 {
                    normal = [-normal[0], -normal[1], -normal[2]];
                }
                let normal = normalize3(normal);
                if facets.contains_key(&normal) {
                    continue;
                }
                let level = dot3(normal, lifted[i]);
                if lifted.iter().all(|p| dot3(normal, *p) <= level) {
                    let on: Vec<usize> = (0..n).filter(|&m| dot3(normal, lifted[m]) == level).collect();
                    facets.insert(normal, on);
                }
            }
        }
    }

    let mut vertices = Vec::new();
    let mut dual_cells = Vec::new();
    // hull edge (sorted endpoints) -> (cell, oriented edge in that cell)
    let mut edge_owner: BTreeMap<[Point2; 2], Vec<(usize, [Point2; 2])>> = BTreeMap::new();
    for (normal, members) in &facets {
        let pts: Vec<Point2> = members.iter().map(|&m| support[m]).collect();
        let cell = convex_hull(&pts)?;
        let idx = vertices.len();
        let nz = normal[2] as f64;
        vertices.push([
            normal[0] as f64 / nz / SNAP_SCALE,
            normal[1] as f64 / nz / SNAP_SCALE,
        ]);
        let cv = cell.vertices().to_vec();
        for e in 0..cv.len() {
            let (u, v) = (cv[e], cv[(e + 1) % cv.len()]);
            let key = if u < v { [u, v] } else { [v, u] };
            edge_owner.entry(key).or_default().push((idx, [u, v]));
        }
        dual_cells.push(cv);
    }

    let mut edges = Vec::new();
    let mut rays = Vec::new();
    for (key, owners) in edge_owner {
        let (cell, [u, v]) = owners[0];
        let outward = primitive([v[1] - u[1], u[0] - v[0]]);
        let weight = lattice_length(u, v);
        match owners.len() {
            1 => rays.push(CurveRay {
                vertex: Some(cell),
                base: vertices[cell],
                direction: outward,
                weight,
                dual_edge: key,
            }),
            _ => edges.push(CurveEdge {
                from: cell,
                to: owners[1].0,
                direction: outward,
                weight,
                dual_edge: key,
            }),
        }
    }
    Ok(TropicalCurve { vertices, edges, rays, dual_cells })
}

/// Parallel lines of a support lying on one affine line.
fn collinear_curve(h: &TropicalPoly, lifted: &[P3]) -> TropicalCurve {
    let support = h.support();
    let origin = *support.iter().min().expect("nonempty");
    let far = *support.iter().max().expect("nonempty");
    let d = primitive([far[0] - origin[0], far[1] - origin[1]]);
    let coord = |a: Point2| -> i64 {
        if d[0] != 0 {
            (a[0] - origin[0]) / d[0]
        } else {
            (a[1] - origin[1]) / d[1]
        }
    };
    let mut pts: Vec<(i64, i128, Point2, f64)> = h
        .terms()
        .zip(lifted)
        .map(|((a, b), l)| (coord(a), l[2], a, b))
        .collect();
    pts.sort_by_key(|p| p.0);
    // upper hull in the (t, lift) plane
    let mut upper: Vec<(i64, i128, Point2, f64)> = Vec::new();
    for p in pts {
        while upper.len() >= 2 {
            let (a, b) = (upper[upper.len() - 2], upper[upper.len() - 1]);
            let c = (b.0 - a.0) as i128 * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) as i128;
            if c >= 0 {
                upper.pop();
            } else {
                break;
            }
        }
        upper.push(p);
    }
    let perp = [-d[1], d[0]];
    let norm2 = (d[0] * d[0] + d[1] * d[1]) as f64;
    let mut rays = Vec::new();
    for w in upper.windows(2) {
        let (a, b) = (w[0], w[1]);
        // <x, d> = (b_a - b_b) / (t_b - t_a)
        let s = (a.1 - b.1) as f64 / SNAP_SCALE / (b.0 - a.0) as f64;
        let base = [s * d[0] as f64 / norm2, s * d[1] as f64 / norm2];
        let weight = (b.0 - a.0) as u64;
        for dir in [perp, [-perp[0], -perp[1]]] {
            rays.push(CurveRay { vertex: None, base, direction: dir, weight, dual_edge: [a.2, b.2] });
        }
    }
    TropicalCurve { vertices: Vec::new(), edges: Vec::new(), rays, dual_cells: Vec::new() }
}

impl TropicalCurve {
    /// Weighted sum of outgoing primitive directions at each vertex.
    pub fn balancing_defects(&self) -> Vec<Point2> {
        let mut sums = vec![[0i64; 2]; self.vertices.len()];
        for e in &self.edges {
            let w = e.weight as i64;
            sums[e.from][0] += w * e.direction[0];
            sums[e.from][1] += w * e.direction[1];
            sums[e.to][0] -= w * e.direction[0];
            sums[e.to][1] -= w * e.direction[1];
        }
        for r in &self.rays {
            if let Some(v) = r.vertex {
                let w = r.weight as i64;
                sums[v][0] += w * r.direction[0];
                sums[v][1] += w * r.direction[1];
            }
        }
        sums
    }

    pub fn is_balanced(&self) -> bool {
        self.balancing_defects().iter().all(|s| *s == [0, 0])
    }

    /// Bounding box of vertices and ray bases.
    pub fn bounding_box(&self) -> Option<[f64; 4]> {
        let pts = self.vertices.iter().chain(self.rays.iter().map(|r| &r.base));
        let mut bb: Option<[f64; 4]> = None;
        for p in pts {
            let b = bb.get_or_insert([p[0], p[0], p[1], p[1]]);
            b[0] = b[0].min(p[0]);
            b[1] = b[1].max(p[0]);
            b[2] = b[2].min(p[1]);
            b[3] = b[3].max(p[1]);
        }
        bb
    }

    /// Points along the curve clipped to a box: vertices, edge samples and ray samples.
    pub fn sample_points(&self, bounds: [f64; 4], step: f64) -> Vec<[f64; 2]> {
        let inside = |p: [f64; 2]| p[0] >= bounds[0] && p[0] <= bounds[1] && p[1] >= bounds[2] && p[1] <= bounds[3];
        let mut out: Vec<[f64; 2]> = Vec::new();
        let mut push_segment = |a: [f64; 2], b: [f64; 2]| {
            let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            let n = (len / step).ceil().max(1.0) as usize;
            for k in 0..=n {
                let t = k as f64 / n as f64;
                let p = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
                if inside(p) {
                    out.push(p);
                }
            }
        };
        for e in &self.edges {
            push_segment(self.vertices[e.from], self.vertices[e.to]);
        }
        let diag = ((bounds[1] - bounds[0]).powi(2) + (bounds[3] - bounds[2]).powi(2)).sqrt();
        for r in &self.rays {
            let dn = ((r.direction[0] * r.direction[0] + r.direction[1] * r.direction[1]) as f64).sqrt();
            let center = [(bounds[0] + bounds[1]) / 2.0, (bounds[2] + bounds[3]) / 2.0];
            let reach = diag + ((r.base[0] - center[0]).powi(2) + (r.base[1] - center[1]).powi(2)).sqrt();
            let end = [
                r.base[0] + reach * r.direction[0] as f64 / dn,
                r.base[1] + reach * r.direction[1] as f64 / dn,
            ];
            push_segment(r.base, end);
        }
        out
    }
}
