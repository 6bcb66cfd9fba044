use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point2 = [i64; 2];

/// Convex lattice polygon (or a lower-dimensional degeneration of one).
///
/// Vertices run counterclockwise from the lexicographically smallest one and
/// no three consecutive vertices are collinear.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePolytope {
    vertices: Vec<Point2>,
    dimension: u8,
}

pub(crate) fn cross(o: Point2, a: Point2, b: Point2) -> i128 {
    let (ax, ay) = ((a[0] - o[0]) as i128, (a[1] - o[1]) as i128);
    let (bx, by) = ((b[0] - o[0]) as i128, (b[1] - o[1]) as i128);
    ax * by - ay * bx
}

/// Monotone-chain hull with collinear points discarded.
pub fn convex_hull(points: &[Point2]) -> Result<LatticePolytope> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() == 1 {
        return Ok(LatticePolytope { vertices: pts, dimension: 0 });
    }
    let mut lower: Vec<Point2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 {
        return Ok(LatticePolytope { vertices: lower, dimension: 1 });
    }
    Ok(LatticePolytope { vertices: lower, dimension: 2 })
}

/// Hull of all pairwise vertex sums.
pub fn minkowski_sum(p: &LatticePolytope, q: &LatticePolytope) -> LatticePolytope {
    let sums: Vec<Point2> = p
        .vertices
        .iter()
        .flat_map(|a| q.vertices.iter().map(move |b| [a[0] + b[0], a[1] + b[1]]))
        .collect();
    convex_hull(&sums).expect("sum of nonempty polytopes is nonempty")
}

/// Twice the Euclidean area, so the standard simplex has volume 1.
pub fn normalized_volume(p: &LatticePolytope) -> Rational64 {
    Rational64::from_integer(p.twice_area() as i64)
}

/// `(NVol(P+Q) - NVol(P) - NVol(Q)) / 2`.
pub fn mixed_volume(p: &LatticePolytope, q: &LatticePolytope) -> Rational64 {
    let sum = minkowski_sum(p, q);
    (normalized_volume(&sum) - normalized_volume(p) - normalized_volume(q)) / Rational64::from_integer(2)
}

impl LatticePolytope {
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn dimension(&self) -> u8 {
        self.dimension
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dimension == 2
    }

    pub fn twice_area(&self) -> i128 {
        if self.dimension < 2 {
            return 0;
        }
        let n = self.vertices.len();
        let s: i128 = (0..n)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % n];
                a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128
            })
            .sum();
        s.abs()
    }

    pub fn is_vertex(&self, p: Point2) -> bool {
        self.vertices.contains(&p)
    }

    /// Exact closed containment test.
    pub fn contains(&self, p: Point2) -> bool {
        match self.dimension {
            0 => self.vertices[0] == p,
            1 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                cross(a, b, p) == 0
                    && (a[0].min(b[0])..=a[0].max(b[0])).contains(&p[0])
                    && (a[1].min(b[1])..=a[1].max(b[1])).contains(&p[1])
            }
            _ => {
                let n = self.vertices.len();
                (0..n).all(|i| cross(self.vertices[i], self.vertices[(i + 1) % n], p) >= 0)
            }
        }
    }

    /// Lattice points of the polygon, row by row.
    pub fn lattice_points(&self) -> Vec<Point2> {
        let (mut lo, mut hi) = ([i64::MAX; 2], [i64::MIN; 2]);
        for v in &self.vertices {
            for k in 0..2 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        let mut out = Vec::new();
        for y in lo[1]..=hi[1] {
            for x in lo[0]..=hi[0] {
                if self.contains([x, y]) {
                    out.push([x, y]);
                }
            }
        }
        out
    }

    pub fn translate(&self, by: Point2) -> LatticePolytope {
        LatticePolytope {
            vertices: self.vertices.iter().map(|v| [v[0] + by[0], v[1] + by[1]]).collect(),
            dimension: self.dimension,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t() -> LatticePolytope {
        convex_hull(&[[0, 0], [1, 0], [0, 1]]).unwrap()
    }

    fn q() -> LatticePolytope {
        convex_hull(&[[0, 0], [2, 1], [1, 2]]).unwrap()
    }

    #[test]
    fn hull_examples() {
        let h = convex_hull(&[[0, 0], [2, 1], [1, 2], [1, 1]]).unwrap();
        assert_eq!(h.vertices(), &[[0, 0], [2, 1], [1, 2]]);
        let h = convex_hull(&[[0, 0]]).unwrap();
        assert_eq!(h.dimension(), 0);
        let h = convex_hull(&[[0, 0], [2, 0], [0, 2], [2, 2], [1, 1]]).unwrap();
        assert_eq!(h.vertices(), &[[0, 0], [2, 0], [2, 2], [0, 2]]);
        assert!(convex_hull(&[]).is_err());
        let seg = convex_hull(&[[0, 0], [1, 1], [2, 2]]).unwrap();
        assert_eq!(seg.dimension(), 1);
        assert_eq!(seg.vertices(), &[[0, 0], [2, 2]]);
    }

    #[test]
    fn minkowski_examples() {
        let origin = convex_hull(&[[0, 0]]).unwrap();
        assert_eq!(minkowski_sum(&t(), &origin), t());
        assert_eq!(minkowski_sum(&t(), &t()).vertices(), &[[0, 0], [2, 0], [0, 2]]);
        assert_eq!(
            minkowski_sum(&t(), &q()).vertices(),
            &[[0, 0], [1, 0], [3, 1], [1, 3], [0, 1]]
        );
    }

    #[test]
    fn volume_examples() {
        assert_eq!(normalized_volume(&t()), Rational64::from_integer(1));
        assert_eq!(normalized_volume(&q()), Rational64::from_integer(3));
        assert_eq!(normalized_volume(&minkowski_sum(&t(), &q())), Rational64::from_integer(10));
        let seg = convex_hull(&[[0, 0], [3, 1]]).unwrap();
        assert_eq!(normalized_volume(&seg), Rational64::from_integer(0));
    }

    #[test]
    fn mixed_volume_examples() {
        assert_eq!(mixed_volume(&t(), &t()), Rational64::from_integer(1));
        assert_eq!(mixed_volume(&t(), &q()), Rational64::from_integer(3));
        let square = convex_hull(&[[0, 0], [2, 0], [0, 2], [2, 2]]).unwrap();
        let quad = convex_hull(&[[1, 0], [3, 0], [0, 3], [0, 1]]).unwrap();
        assert_eq!(
            minkowski_sum(&square, &quad).vertices(),
            &[[0, 1], [1, 0], [5, 0], [5, 2], [2, 5], [0, 5]]
        );
        assert_eq!(mixed_volume(&square, &quad), Rational64::from_integer(12));
    }

    #[test]
    fn containment_and_lattice_points() {
        assert!(q().contains([1, 1]));
        assert!(!q().contains([1, 0]));
        assert_eq!(q().lattice_points(), vec![[0, 0], [1, 1], [2, 1], [1, 2]]);
    }

    fn polygon() -> impl Strategy<Value = LatticePolytope> {
        prop::collection::vec((0i64..=5, 0i64..=5), 3..8)
            .prop_map(|v| convex_hull(&v.into_iter().map(|(a, b)| [a, b]).collect::<Vec<_>>()).unwrap())
            .prop_filter("two-dimensional", |p| p.is_full_dimensional())
    }

    proptest! {
        #[test]
        fn mixed_volume_symmetric_nonnegative_integer(p in polygon(), q in polygon()) {
            let a = mixed_volume(&p, &q);
            prop_assert_eq!(a, mixed_volume(&q, &p));
            prop_assert!(a.is_integer());
            prop_assert!(a >= Rational64::from_integer(0));
        }

        #[test]
        fn volume_superadditive(p in polygon(), q in polygon()) {
            let s = minkowski_sum(&p, &q);
            prop_assert!(normalized_volume(&s) >= normalized_volume(&p) + normalized_volume(&q));
        }

        #[test]
        fn hull_vertices_are_extreme(p in polygon()) {
            let v = p.vertices();
            let n = v.len();
            for i in 0..n {
                prop_assert!(cross(v[i], v[(i + 1) % n], v[(i + 2) % n]) > 0);
            }
        }
    }
}
