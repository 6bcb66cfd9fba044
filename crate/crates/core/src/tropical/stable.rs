//! Stable intersection of two tropical plane curves by small translations.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::curve::TropicalCurve;
use crate::error::{Error, Result};
use crate::geometry::{fan::angle_cmp, Point2};

/// Translation lengths, largest first.
pub const EPSILONS: [f64; 3] = [1e-2, 1e-3, 1e-4];
/// Limit points closer than this are merged.
pub const CLUSTER_TOLERANCE: f64 = 1e-5;
/// Two perturbation directions must give limit points this close.
pub const AGREEMENT_TOLERANCE: f64 = 1e-6;

/// Pair of subdivision edges spanning a mixed cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedCell {
    pub first: [Point2; 2],
    pub second: [Point2; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StableIntersectionPoint {
    pub location: [f64; 2],
    pub multiplicity: u64,
    pub dual_mixed_cells: Vec<MixedCell>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StableIntersection {
    pub points: Vec<StableIntersectionPoint>,
    /// Transverse crossings under a generic translation, one per mixed cell.
    pub mixed_cell_count: usize,
    pub directions: [[f64; 2]; 2],
}

impl StableIntersection {
    pub fn total_multiplicity(&self) -> u64 {
        self.points.iter().map(|p| p.multiplicity).sum()
    }
}

/// A segment `base + s * dir` for `s` in `[0, 1]`, or a ray for `s >= 0`.
#[derive(Clone, Copy, Debug)]
struct Piece {
    base: [f64; 2],
    dir: [f64; 2],
    bounded: bool,
    primitive: Point2,
    weight: u64,
    dual: [Point2; 2],
}

fn pieces(c: &TropicalCurve) -> Vec<Piece> {
    let mut out = Vec::new();
    for e in &c.edges {
        let (a, b) = (c.vertices[e.from], c.vertices[e.to]);
        out.push(Piece {
            base: a,
            dir: [b[0] - a[0], b[1] - a[1]],
            bounded: true,
            primitive: e.direction,
            weight: e.weight,
            dual: e.dual_edge,
        });
    }
    for r in &c.rays {
        out.push(Piece {
            base: r.base,
            dir: [r.direction[0] as f64, r.direction[1] as f64],
            bounded: false,
            primitive: r.direction,
            weight: r.weight,
            dual: r.dual_edge,
        });
    }
    out
}

fn det(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Parameters `(s, t)` of the crossing of the two supporting lines.
fn line_crossing(p: &Piece, q: &Piece, shift: [f64; 2]) -> Option<(f64, f64)> {
    let d = det(p.dir, q.dir);
    if p.primitive[0] * q.primitive[1] == p.primitive[1] * q.primitive[0] {
        return None;
    }
    let r = [q.base[0] + shift[0] - p.base[0], q.base[1] + shift[1] - p.base[1]];
    Some((det(r, q.dir) / d, det(r, p.dir) / d))
}

fn within(piece: &Piece, s: f64) -> bool {
    s >= 0.0 && (!piece.bounded || s <= 1.0)
}

struct Crossing {
    i: usize,
    j: usize,
    multiplicity: u64,
}

fn crossings(p1: &[Piece], p2: &[Piece], shift: [f64; 2]) -> Vec<Crossing> {
    let mut out = Vec::new();
    for (i, a) in p1.iter().enumerate() {
        for (j, b) in p2.iter().enumerate() {
            if let Some((s, t)) = line_crossing(a, b, shift) {
                if within(a, s) && within(b, t) {
                    let m = (a.primitive[0] * b.primitive[1] - a.primitive[1] * b.primitive[0]).unsigned_abs();
                    out.push(Crossing { i, j, multiplicity: m * a.weight * b.weight });
                }
            }
        }
    }
    out
}

fn limit_points(c1: &TropicalCurve, c2: &TropicalCurve, v: [f64; 2]) -> Result<(Vec<StableIntersectionPoint>, usize)> {
    let (p1, p2) = (pieces(c1), pieces(c2));
    let mut totals = Vec::new();
    let mut last = Vec::new();
    for eps in EPSILONS {
        let hits = crossings(&p1, &p2, [eps * v[0], eps * v[1]]);
        totals.push(hits.iter().map(|h| h.multiplicity).sum::<u64>());
        last = hits;
    }
    if totals[1] != totals[2] {
        return Err(Error::NonConvergentStableIntersection(format!(
            "total multiplicity changes from {} to {} as the translation shrinks",
            totals[1], totals[2]
        )));
    }
    let count = last.len();
    let mut points: Vec<StableIntersectionPoint> = Vec::new();
    for h in last {
        let (a, b) = (&p1[h.i], &p2[h.j]);
        let (s, _) = line_crossing(a, b, [0.0, 0.0]).expect("transverse pieces");
        let loc = [a.base[0] + s * a.dir[0], a.base[1] + s * a.dir[1]];
        let cell = MixedCell { first: a.dual, second: b.dual };
        match points
            .iter_mut()
            .find(|p| (p.location[0] - loc[0]).abs().max((p.location[1] - loc[1]).abs()) < CLUSTER_TOLERANCE)
        {
            Some(p) => {
                p.multiplicity += h.multiplicity;
                p.dual_mixed_cells.push(cell);
            }
            None => points.push(StableIntersectionPoint { location: loc, multiplicity: h.multiplicity, dual_mixed_cells: vec![cell] }),
        }
    }
    points.sort_by(|a, b| {
        a.location[0]
            .partial_cmp(&b.location[0])
            .unwrap_or(Ordering::Equal)
            .then(a.location[1].partial_cmp(&b.location[1]).unwrap_or(Ordering::Equal))
    });
    Ok((points, count))
}

/// Translation direction derived from `seed`.
pub fn seeded_direction(seed: u64) -> [f64; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    [theta.cos(), theta.sin()]
}

/// Limit of `C1 ∩ (C2 + eps v)` as `eps -> 0`, cross-checked between two directions.
pub fn stable_intersection(c1: &TropicalCurve, c2: &TropicalCurve, seed: u64) -> Result<StableIntersection> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let n = (1.0 + phi * phi).sqrt();
    let v1 = [1.0 / n, phi / n];
    let v2 = seeded_direction(seed);
    let (a, count) = limit_points(c1, c2, v1)?;
    let (b, _) = limit_points(c1, c2, v2)?;
    let agree = a.len() == b.len()
        && a.iter().all(|p| {
            b.iter().any(|q| {
                q.multiplicity == p.multiplicity
                    && (q.location[0] - p.location[0]).abs().max((q.location[1] - p.location[1]).abs()) < AGREEMENT_TOLERANCE
            })
        });
    if !agree {
        return Err(Error::NonConvergentStableIntersection(format!(
            "{} limit points along one direction, {} along another",
            a.len(),
            b.len()
        )));
    }
    Ok(StableIntersection { points: a, mixed_cell_count: count, directions: [v1, v2] })
}

/// Sum of stable intersection multiplicities.
pub fn tropical_bernstein_count(c1: &TropicalCurve, c2: &TropicalCurve, seed: u64) -> Result<u64> {
    Ok(stable_intersection(c1, c2, seed)?.total_multiplicity())
}

/// Unit directions of the rays, deduplicated, sorted by angle.
pub fn limit_directions(c: &TropicalCurve) -> Vec<[f64; 2]> {
    let dirs: BTreeSet<Point2> = c.rays.iter().map(|r| r.direction).collect();
    let mut prim: Vec<Point2> = dirs.into_iter().collect();
    prim.sort_by(|a, b| angle_cmp(*a, *b));
    prim.iter()
        .map(|d| {
            let n = ((d[0] * d[0] + d[1] * d[1]) as f64).sqrt();
            [d[0] as f64 / n, d[1] as f64 / n]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{convex_hull, mixed_volume};
    use crate::tropical::{tropical_curve, TropicalPoly};
    use rand::Rng;

    fn line(c: [f64; 3]) -> TropicalCurve {
        tropical_curve(&TropicalPoly::new([([1, 0], c[0]), ([0, 1], c[1]), ([0, 0], c[2])]).unwrap()).unwrap()
    }

    fn random_curve(support: &[Point2], rng: &mut ChaCha8Rng) -> TropicalCurve {
        let terms = support.iter().map(|a| (*a, rng.random_range(-3000i64..=3000) as f64 / 1000.0));
        tropical_curve(&TropicalPoly::new(terms).unwrap()).unwrap()
    }

    #[test]
    fn generic_lines_meet_once() {
        let s = stable_intersection(&line([0.0, 0.0, 0.0]), &line([0.5, -0.3, 0.2]), 1).unwrap();
        assert_eq!(s.points.len(), 1);
        assert_eq!(s.points[0].multiplicity, 1);
    }

    #[test]
    fn line_with_itself_meets_at_vertex() {
        let l = line([0.0, 0.0, 0.0]);
        let s = stable_intersection(&l, &l, 7).unwrap();
        assert_eq!(s.points.len(), 1);
        assert_eq!(s.points[0].multiplicity, 1);
        assert!(s.points[0].location[0].abs() < 1e-9 && s.points[0].location[1].abs() < 1e-9);
    }

    #[test]
    fn line_against_triangle_curve() {
        let q = tropical_curve(&TropicalPoly::new([([0, 0], 0.0), ([2, 1], 0.4), ([1, 2], -0.2)]).unwrap()).unwrap();
        assert_eq!(tropical_bernstein_count(&line([0.0, 0.0, 0.0]), &q, 3).unwrap(), 3);
    }

    #[test]
    fn random_lifts_match_mixed_volume() {
        let t: Vec<Point2> = vec![[0, 0], [1, 0], [0, 1]];
        let q: Vec<Point2> = vec![[0, 0], [2, 1], [1, 2], [1, 1]];
        let sq: Vec<Point2> = vec![[0, 0], [1, 0], [2, 0], [0, 1], [1, 1], [2, 1], [0, 2], [1, 2], [2, 2]];
        let quad: Vec<Point2> = vec![[3, 0], [0, 3], [1, 0], [0, 1]];
        let mv1 = mixed_volume(&convex_hull(&t).unwrap(), &convex_hull(&q).unwrap());
        let mv2 = mixed_volume(&convex_hull(&sq).unwrap(), &convex_hull(&quad).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for seed in 0..5 {
            let (a, b) = (random_curve(&t, &mut rng), random_curve(&q, &mut rng));
            assert_eq!(tropical_bernstein_count(&a, &b, seed).unwrap() as i64, mv1.to_integer());
            let (a, b) = (random_curve(&sq, &mut rng), random_curve(&quad, &mut rng));
            assert_eq!(tropical_bernstein_count(&a, &b, seed).unwrap() as i64, mv2.to_integer());
        }
    }

    #[test]
    fn directions() {
        let d = limit_directions(&line([0.0, 0.0, 0.0]));
        let r = 0.5f64.sqrt();
        assert_eq!(d.len(), 3);
        assert!((d[0][0] - r).abs() < 1e-12 && (d[0][1] - r).abs() < 1e-12);
        assert_eq!(d[1], [-1.0, 0.0]);
        assert_eq!(d[2], [0.0, -1.0]);

        let v = tropical_curve(&TropicalPoly::new([([2, 0], 0.0), ([0, 0], 0.0)]).unwrap()).unwrap();
        assert_eq!(limit_directions(&v), vec![[0.0, 1.0], [0.0, -1.0]]);

        let q = tropical_curve(&TropicalPoly::new([([0, 0], 0.0), ([2, 1], 0.0), ([1, 2], 0.0)]).unwrap()).unwrap();
        let d = limit_directions(&q);
        assert_eq!(d.len(), 3);
        // outward normals of the edges (2,1), (-1,1), (-1,-2)
        for dir in [[1.0f64, -2.0], [1.0, 1.0], [-2.0, 1.0]] {
            let n = (dir[0] * dir[0] + dir[1] * dir[1]).sqrt();
            assert!(d.iter().any(|u| (u[0] - dir[0] / n).abs() < 1e-12 && (u[1] - dir[1] / n).abs() < 1e-12));
        }
    }
}
