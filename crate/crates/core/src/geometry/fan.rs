use std::cmp::Ordering;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::polygon::{LatticePolytope, Point2};
use crate::error::{Error, Result};

/// Closed planar cone swept counterclockwise from `start` to `end`.
///
/// Both rays are primitive. `start == end` encodes the full plane and
/// `start == -end` a half-plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cone2 {
    pub start: Point2,
    pub end: Point2,
}

/// Which face of which source polytope a fan cone comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRef {
    pub polytope: usize,
    pub vertex: Point2,
    pub cone: Cone2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanCone {
    pub cone: Cone2,
    pub provenance: Vec<FaceRef>,
}

/// Complete planar fan, cones in counterclockwise order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan2 {
    pub cones: Vec<FanCone>,
    pub sources: usize,
}

pub fn primitive(v: Point2) -> Point2 {
    let g = v[0].gcd(&v[1]);
    if g == 0 {
        v
    } else {
        [v[0] / g, v[1] / g]
    }
}

fn cross(a: Point2, b: Point2) -> i128 {
    a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128
}

fn dot(a: Point2, b: Point2) -> i128 {
    a[0] as i128 * b[0] as i128 + a[1] as i128 * b[1] as i128
}

/// 0 for directions in `[0°, 180°)` relative to `base`, 1 otherwise.
fn half(base: Point2, v: Point2) -> u8 {
    let c = cross(base, v);
    if c > 0 || (c == 0 && dot(base, v) > 0) {
        0
    } else {
        1
    }
}

/// Orders nonzero directions by counterclockwise angle measured from `base`.
pub fn angle_cmp_from(base: Point2, a: Point2, b: Point2) -> Ordering {
    half(base, a).cmp(&half(base, b)).then_with(|| 0.cmp(&cross(a, b)))
}

/// Orders nonzero directions by angle in `[0°, 360°)` from the positive x-axis.
pub fn angle_cmp(a: Point2, b: Point2) -> Ordering {
    angle_cmp_from([1, 0], a, b)
}

impl Cone2 {
    pub fn new(start: Point2, end: Point2) -> Self {
        Cone2 { start: primitive(start), end: primitive(end) }
    }

    pub fn is_full_plane(&self) -> bool {
        self.start == self.end
    }

    pub fn is_half_plane(&self) -> bool {
        self.start == [-self.end[0], -self.end[1]]
    }

    /// Angular width in degrees, in `(0, 360]`.
    pub fn width_degrees(&self) -> f64 {
        if self.is_full_plane() {
            return 360.0;
        }
        let a = (self.start[1] as f64).atan2(self.start[0] as f64);
        let b = (self.end[1] as f64).atan2(self.end[0] as f64);
        (b - a).to_degrees().rem_euclid(360.0)
    }

    /// Whether `d` lies in the open cone.
    pub fn contains_interior(&self, d: Point2) -> bool {
        if d == [0, 0] {
            return false;
        }
        if self.is_full_plane() {
            return true;
        }
        let d = primitive(d);
        d != self.start && angle_cmp_from(self.start, d, self.end) == Ordering::Less
    }

    /// Whether `d` lies in the closed cone.
    pub fn contains(&self, d: Point2) -> bool {
        d == [0, 0] || primitive(d) == self.start || primitive(d) == self.end || self.contains_interior(d)
    }

    /// A direction in the open cone.
    pub fn interior_direction(&self) -> Point2 {
        if self.is_full_plane() {
            return [1, 0];
        }
        if self.is_half_plane() || angle_cmp_from(self.start, self.end, [-self.start[0], -self.start[1]]) == Ordering::Greater {
            // reflex or straight: rotate start by 90°
            return [-self.start[1], self.start[0]];
        }
        [self.start[0] + self.end[0], self.start[1] + self.end[1]]
    }

    /// Whether two cones share an open two-dimensional region.
    pub fn meets_full_dimensionally(&self, other: &Cone2) -> bool {
        let rays = [self.start, self.end, other.start, other.end, self.interior_direction(), other.interior_direction()];
        rays.iter().any(|d| self.contains_interior(*d) && other.contains_interior(*d))
            || rays.iter().enumerate().any(|(i, a)| {
                rays[i + 1..].iter().any(|b| {
                    let d = [a[0] + b[0], a[1] + b[1]];
                    self.contains_interior(d) && other.contains_interior(d)
                })
            })
    }
}

/// Normal fan of a polygon: one cone per vertex between the outward normals
/// of its incoming and outgoing edges (max convention).
pub fn normal_fan(p: &LatticePolytope) -> Result<Fan2> {
    if !p.is_full_dimensional() {
        return Err(Error::DegeneratePolytope);
    }
    let v = p.vertices();
    let n = v.len();
    let normal = |i: usize| {
        let (a, b) = (v[i], v[(i + 1) % n]);
        primitive([b[1] - a[1], a[0] - b[0]])
    };
    let mut cones: Vec<FanCone> = (0..n)
        .map(|i| {
            let cone = Cone2::new(normal((i + n - 1) % n), normal(i));
            FanCone { cone, provenance: vec![FaceRef { polytope: 0, vertex: v[i], cone }] }
        })
        .collect();
    cones.sort_by(|a, b| angle_cmp(a.cone.start, b.cone.start));
    Ok(Fan2 { cones, sources: 1 })
}

impl Fan2 {
    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    /// Boundary rays in counterclockwise order.
    pub fn rays(&self) -> Vec<Point2> {
        let mut rays: Vec<Point2> = self.cones.iter().flat_map(|c| [c.cone.start, c.cone.end]).collect();
        rays.sort_by(|a, b| angle_cmp(*a, *b));
        rays.dedup();
        rays
    }

    /// The cone containing direction `d` in its interior, if any.
    pub fn cone_containing(&self, d: Point2) -> Option<&FanCone> {
        self.cones.iter().find(|c| c.cone.contains_interior(d))
    }

    /// The cone labelled by `vertex` of source polytope `polytope`.
    pub fn cone_of_vertex(&self, polytope: usize, vertex: Point2) -> Option<Cone2> {
        self.cones.iter().find_map(|c| {
            c.provenance
                .iter()
                .find(|f| f.polytope == polytope && f.vertex == vertex)
                .map(|f| f.cone)
        })
    }
}

/// All full-dimensional intersections of a cone of `f1` with a cone of `f2`.
pub fn common_refinement(f1: &Fan2, f2: &Fan2) -> Fan2 {
    let mut rays = f1.rays();
    rays.extend(f2.rays());
    rays.sort_by(|a, b| angle_cmp(*a, *b));
    rays.dedup();
    let offset = f1.sources;
    let n = rays.len();
    let cones = (0..n)
        .map(|i| {
            let cone = Cone2 { start: rays[i], end: rays[(i + 1) % n] };
            let d = cone.interior_direction();
            let mut provenance = Vec::new();
            if let Some(c) = f1.cone_containing(d) {
                provenance.extend(c.provenance.iter().cloned());
            }
            if let Some(c) = f2.cone_containing(d) {
                provenance.extend(c.provenance.iter().map(|f| FaceRef { polytope: f.polytope + offset, ..f.clone() }));
            }
            FanCone { cone, provenance }
        })
        .collect();
    Fan2 { cones, sources: f1.sources + f2.sources }
}

/// Cones of a refinement that are strictly smaller than every source cone.
pub fn mixed_cones(fan: &Fan2) -> Result<Vec<FanCone>> {
    let mut out = Vec::new();
    for c in &fan.cones {
        if c.provenance.len() < 2 {
            return Err(Error::MissingProvenance);
        }
        if c.provenance.iter().all(|f| f.cone != c.cone) {
            out.push(c.clone());
        }
    }
    Ok(out)
}
