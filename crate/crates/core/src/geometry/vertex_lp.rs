//! Exact vertex certification for small integer point sets in any dimension.
//!
//! A point is a vertex iff the system `sum l_j q_j = p, sum l_j = 1, l >= 0`
//! over the remaining points is infeasible. Feasibility is decided by a
//! phase-one simplex in rational arithmetic with Bland's pivoting rule.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Flags each point that is not in the convex hull of the other points.
pub fn certify_vertices<const D: usize>(points: &[[i64; D]]) -> Vec<bool> {
    (0..points.len())
        .map(|i| {
            let others: Vec<&[i64; D]> = points
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, q)| q)
                .collect();
            !in_hull(&points[i], &others)
        })
        .collect()
}

fn in_hull<const D: usize>(p: &[i64; D], others: &[&[i64; D]]) -> bool {
    if others.is_empty() {
        return false;
    }
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(D + 1);
    let mut b: Vec<BigRational> = Vec::with_capacity(D + 1);
    for k in 0..D {
        a.push(others.iter().map(|q| rat(q[k])).collect());
        b.push(rat(p[k]));
    }
    a.push(vec![rat(1); others.len()]);
    b.push(rat(1));
    feasible(a, b)
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Whether `A x = b, x >= 0` has a solution.
fn feasible(a: Vec<Vec<BigRational>>, b: Vec<BigRational>) -> bool {
    let rows = a.len();
    let cols = a[0].len();
    let width = cols + rows + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(rows + 1);
    for (r, (mut row, rhs)) in a.into_iter().zip(b).enumerate() {
        let negate = rhs.is_negative();
        let mut full: Vec<BigRational> = Vec::with_capacity(width);
        full.append(&mut row);
        for k in 0..rows {
            full.push(rat(i64::from(k == r)));
        }
        full.push(rhs);
        if negate {
            for (k, v) in full.iter_mut().enumerate() {
                if k < cols || k == width - 1 {
                    *v = -v.clone();
                }
            }
        }
        t.push(full);
    }
    // phase-one objective: minimise the sum of artificials, stored as reduced costs
    let mut obj: Vec<BigRational> = vec![BigRational::zero(); width];
    for row in &t {
        for k in 0..cols {
            obj[k] -= &row[k];
        }
        obj[width - 1] -= &row[width - 1];
    }
    t.push(obj);
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    loop {
        let entering = (0..cols + rows).find(|&k| t[rows][k].is_negative());
        let Some(e) = entering else { break };
        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..rows {
            if t[r][e].is_positive() {
                let ratio = &t[r][width - 1] / &t[r][e];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else { break };
        let pivot = t[pr][e].clone();
        for v in t[pr].iter_mut() {
            *v = &*v / &pivot;
        }
        let pivot_row = t[pr].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r != pr && !row[e].is_zero() {
                let factor = row[e].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &factor * pv;
                }
            }
        }
        basis[pr] = e;
    }
    t[rows][width - 1].is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Solves the barycentric system on a subset exactly; `None` unless the
    /// subset is affinely independent and the system is consistent.
    fn barycentric<const D: usize>(p: &[i64; D], subset: &[[i64; D]]) -> Option<Vec<BigRational>> {
        let k = subset.len();
        let mut m: Vec<Vec<BigRational>> = (0..D)
            .map(|r| {
                let mut row: Vec<BigRational> = subset.iter().map(|q| rat(q[r])).collect();
                row.push(rat(p[r]));
                row
            })
            .collect();
        let mut ones = vec![rat(1); k];
        ones.push(rat(1));
        m.push(ones);
        let mut rank = 0;
        for c in 0..k {
            let piv = (rank..m.len()).find(|&r| !m[r][c].is_zero())?;
            m.swap(rank, piv);
            let pv = m[rank][c].clone();
            for v in m[rank].iter_mut() {
                *v = &*v / &pv;
            }
            let prow = m[rank].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (v, pv) in row.iter_mut().zip(&prow) {
                        *v -= &f * pv;
                    }
                }
            }
            rank += 1;
        }
        if m[rank..].iter().any(|row| !row[k].is_zero()) {
            return None;
        }
        Some((0..k).map(|c| m[c][k].clone()).collect())
    }

    fn brute_force<const D: usize>(points: &[[i64; D]]) -> Vec<bool> {
        (0..points.len())
            .map(|i| {
                let others: Vec<[i64; D]> =
                    points.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| *q).collect();
                let n = others.len();
                for mask in 1u32..(1 << n) {
                    if mask.count_ones() as usize > D + 1 {
                        continue;
                    }
                    let subset: Vec<[i64; D]> = (0..n).filter(|b| mask & (1 << b) != 0).map(|b| others[b]).collect();
                    if let Some(l) = barycentric(&points[i], &subset) {
                        if l.iter().all(|x| !x.is_negative()) {
                            return false;
                        }
                    }
                }
                true
            })
            .collect()
    }

    #[test]
    fn segment_endpoints() {
        assert_eq!(certify_vertices(&[[0, 0, 0, 0], [2, 0, 0, 0]]), vec![true, true]);
    }

    #[test]
    fn midpoint_is_not_a_vertex() {
        assert_eq!(
            certify_vertices(&[[0, 0, 0, 0], [2, 0, 0, 0], [1, 0, 0, 0]]),
            vec![true, true, false]
        );
    }

    #[test]
    fn box_center_is_not_a_vertex() {
        let mut pts: Vec<[i64; 4]> = Vec::new();
        for mask in 0..16 {
            pts.push([
                if mask & 1 != 0 { 2 } else { 0 },
                if mask & 2 != 0 { 2 } else { 0 },
                if mask & 4 != 0 { 3 } else { 0 },
                if mask & 8 != 0 { 3 } else { 0 },
            ]);
        }
        pts.push([1, 1, 1, 2]);
        let flags = certify_vertices(&pts);
        assert!(flags[..16].iter().all(|&f| f));
        assert!(!flags[16]);
    }

    #[test]
    fn single_point_is_a_vertex() {
        assert_eq!(certify_vertices(&[[3, 1, 4, 1]]), vec![true]);
    }

    #[test]
    fn planar_square_with_center() {
        assert_eq!(
            certify_vertices(&[[0, 0], [2, 0], [2, 2], [0, 2], [1, 1]]),
            vec![true, true, true, true, false]
        );
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(raw in prop::collection::vec(prop::array::uniform4(0i64..3), 1..8)) {
            let mut pts = raw;
            pts.sort();
            pts.dedup();
            prop_assert_eq!(certify_vertices(&pts), brute_force(&pts));
        }
    }
}
