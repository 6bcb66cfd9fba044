//! Marching-squares boundaries of membership grids and their crossings.
//!
//! The dual lattice has a node at every cell center; each 2x2 block of nodes
//! is a square. Boundary segments join midpoints of square edges whose ends
//! differ in membership. Saddles keep diagonal members connected.

use crate::amoeba::{connected_components, Window};

/// Square sides, counterclockwise from the bottom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Bottom,
    Right,
    Top,
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    /// Square `(i, j)`: nodes `(i, j)` to `(i + 1, j + 1)`.
    pub square: (usize, usize),
    pub sides: (Side, Side),
    pub a: [f64; 2],
    pub b: [f64; 2],
}

fn side_midpoint(w: &Window, i: usize, j: usize, s: Side) -> [f64; 2] {
    let p = w.center(i, j);
    let (dx, dy) = (w.dx(), w.dy());
    match s {
        Side::Bottom => [p[0] + 0.5 * dx, p[1]],
        Side::Right => [p[0] + dx, p[1] + 0.5 * dy],
        Side::Top => [p[0] + 0.5 * dx, p[1] + dy],
        Side::Left => [p[0], p[1] + 0.5 * dy],
    }
}

/// Boundary segments of one square.
fn square_segments(w: &Window, m: &[bool], i: usize, j: usize) -> Vec<Segment> {
    let a = m[w.index(i, j)];
    let b = m[w.index(i + 1, j)];
    let c = m[w.index(i + 1, j + 1)];
    let d = m[w.index(i, j + 1)];
    let crossed: Vec<Side> = [(Side::Bottom, a != b), (Side::Right, b != c), (Side::Top, c != d), (Side::Left, d != a)]
        .into_iter()
        .filter(|(_, x)| *x)
        .map(|(s, _)| s)
        .collect();
    let pairs: Vec<(Side, Side)> = match crossed.len() {
        2 => vec![(crossed[0], crossed[1])],
        4 if a && c => vec![(Side::Bottom, Side::Right), (Side::Top, Side::Left)],
        4 => vec![(Side::Left, Side::Bottom), (Side::Right, Side::Top)],
        _ => Vec::new(),
    };
    pairs
        .into_iter()
        .map(|(s, t)| Segment {
            square: (i, j),
            sides: (s, t),
            a: side_midpoint(w, i, j, s),
            b: side_midpoint(w, i, j, t),
        })
        .collect()
}

/// Segments per square, indexed `j * (nx - 1) + i`.
pub fn contour(w: &Window, m: &[bool]) -> Vec<Vec<Segment>> {
    if w.nx < 2 || w.ny < 2 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity((w.nx - 1) * (w.ny - 1));
    for j in 0..w.ny - 1 {
        for i in 0..w.nx - 1 {
            out.push(square_segments(w, m, i, j));
        }
    }
    out
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Intersection of two closed segments; overlapping collinear segments give
/// the midpoint of the overlap.
pub fn segment_intersection(p: &Segment, q: &Segment) -> Option<[f64; 2]> {
    let eps = 1e-12;
    let d1 = cross(q.a, q.b, p.a);
    let d2 = cross(q.a, q.b, p.b);
    let d3 = cross(p.a, p.b, q.a);
    let d4 = cross(p.a, p.b, q.b);
    if d1.abs() < eps && d2.abs() < eps {
        // collinear: project on the dominant axis
        let axis = if (p.b[0] - p.a[0]).abs() >= (p.b[1] - p.a[1]).abs() { 0 } else { 1 };
        let (p0, p1) = (p.a[axis].min(p.b[axis]), p.a[axis].max(p.b[axis]));
        let (q0, q1) = (q.a[axis].min(q.b[axis]), q.a[axis].max(q.b[axis]));
        let (lo, hi) = (p0.max(q0), p1.min(q1));
        if lo > hi + eps {
            return None;
        }
        let t = if (p1 - p0).abs() < eps { 0.0 } else { (0.5 * (lo + hi) - p.a[axis]) / (p.b[axis] - p.a[axis]) };
        return Some([p.a[0] + t * (p.b[0] - p.a[0]), p.a[1] + t * (p.b[1] - p.a[1])]);
    }
    let straddle = |x: f64, y: f64| (x <= eps && y >= -eps) || (x >= -eps && y <= eps);
    if !(straddle(d1, d2) && straddle(d3, d4)) {
        return None;
    }
    let t = d1 / (d1 - d2);
    if !t.is_finite() {
        return None;
    }
    Some([p.a[0] + t * (p.b[0] - p.a[0]), p.a[1] + t * (p.b[1] - p.a[1])])
}

/// All points where the two boundaries meet, square by square.
pub fn contour_crossings(w: &Window, m1: &[bool], m2: &[bool]) -> Vec<[f64; 2]> {
    let c1 = contour(w, m1);
    let c2 = contour(w, m2);
    let mut out = Vec::new();
    for (s1, s2) in c1.iter().zip(&c2) {
        for p in s1 {
            for q in s2 {
                if let Some(x) = segment_intersection(p, q) {
                    out.push(x);
                }
            }
        }
    }
    out
}

/// Length in squares of the longest 8-connected run where both grids have
/// an identical boundary segment.
pub fn longest_shared_run(w: &Window, m1: &[bool], m2: &[bool]) -> usize {
    if w.nx < 2 || w.ny < 2 {
        return 0;
    }
    let c1 = contour(w, m1);
    let c2 = contour(w, m2);
    let sq = Window { nx: w.nx - 1, ny: w.ny - 1, ..*w };
    let shared: Vec<bool> = c1
        .iter()
        .zip(&c2)
        .map(|(a, b)| a.iter().any(|s| b.iter().any(|t| s.sides == t.sides)))
        .collect();
    // 8-connectivity: close diagonal gaps by checking runs on a dilated copy
    let (_, comps) = connected_components(&sq, &dilate_diagonal(&sq, &shared));
    comps
        .iter()
        .map(|cells| cells.iter().filter(|&&c| shared[c]).count())
        .max()
        .unwrap_or(0)
}

/// Adds the two cells bridging every diagonal pair so that 4-connectivity
/// on the result matches 8-connectivity on the input.
fn dilate_diagonal(w: &Window, m: &[bool]) -> Vec<bool> {
    let mut out = m.to_vec();
    for j in 0..w.ny.saturating_sub(1) {
        for i in 0..w.nx.saturating_sub(1) {
            let (a, b, c, d) = (m[w.index(i, j)], m[w.index(i + 1, j)], m[w.index(i + 1, j + 1)], m[w.index(i, j + 1)]);
            if (a && c && !b && !d) || (b && d && !a && !c) {
                out[w.index(i + 1, j)] = true;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(w: &Window, c: [f64; 2], r: f64) -> Vec<bool> {
        (0..w.len())
            .map(|k| {
                let p = w.center_of(k);
                (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2) <= r * r
            })
            .collect()
    }

    #[test]
    fn square_cases() {
        let w = Window::square(0.0, 2.0, 2).unwrap();
        // single member corner
        let m = vec![true, false, false, false];
        let s = contour(&w, &m);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].len(), 1);
        assert_eq!(s[0][0].sides, (Side::Bottom, Side::Left));
        // saddle with members on the main diagonal keeps them joined
        let m = vec![true, false, false, true];
        let s = &contour(&w, &m)[0];
        assert_eq!(s.len(), 2);
        assert!(s.iter().any(|x| x.sides == (Side::Bottom, Side::Right)));
    }

    #[test]
    fn circles_cross_twice() {
        let w = Window::square(-2.0, 2.0, 80).unwrap();
        let a = disk(&w, [-0.5, 0.0], 1.0);
        let b = disk(&w, [0.5, 0.0], 1.0);
        let pts = contour_crossings(&w, &a, &b);
        assert!(!pts.is_empty());
        let expected = [[0.0, 0.75f64.sqrt()], [0.0, -(0.75f64.sqrt())]];
        for p in &pts {
            assert!(expected.iter().any(|e| (e[0] - p[0]).abs() < 0.1 && (e[1] - p[1]).abs() < 0.1), "{p:?}");
        }
        assert!(longest_shared_run(&w, &a, &b) <= 5);
        assert!(longest_shared_run(&w, &a, &a) > 50);
    }

    #[test]
    fn segment_intersections() {
        let s = |a: [f64; 2], b: [f64; 2]| Segment { square: (0, 0), sides: (Side::Bottom, Side::Top), a, b };
        let x = segment_intersection(&s([0.0, 0.0], [1.0, 1.0]), &s([0.0, 1.0], [1.0, 0.0])).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-12 && (x[1] - 0.5).abs() < 1e-12);
        assert!(segment_intersection(&s([0.0, 0.0], [1.0, 0.0]), &s([0.0, 1.0], [1.0, 1.0])).is_none());
        let x = segment_intersection(&s([0.0, 0.0], [1.0, 0.0]), &s([0.5, 0.0], [2.0, 0.0])).unwrap();
        assert!((x[0] - 0.75).abs() < 1e-12);
        // touching at an endpoint counts
        assert!(segment_intersection(&s([0.0, 0.0], [1.0, 0.0]), &s([1.0, 0.0], [1.0, 1.0])).is_some());
    }
}
