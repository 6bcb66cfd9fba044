//! The order map by root counting along torus fibers.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::laurent::{Axis, LaurentPolynomial};

pub type OrderVector = [i64; 2];

pub const DEFAULT_TRIALS: usize = 8;
/// Roots whose log-modulus is this close to the circle make the count unreliable.
pub const NEAR_TOLERANCE: f64 = 1e-6;

/// Deterministic per-point seed, so repeated queries give repeated answers.
fn point_seed(x: [f64; 2]) -> u64 {
    x[0].to_bits() ^ x[1].to_bits().rotate_left(29) ^ 0x5DEE_CE66_D1CE_4E5B
}

/// Zeros minus poles of the fiber polynomial inside `|z_j| = e^{x_j}`.
fn fiber_count(f: &LaurentPolynomial, axis: Axis, x: [f64; 2], theta: f64) -> Result<i64> {
    let j = axis.index();
    let o = axis.other().index();
    let fixed = Complex64::from_polar(x[o].exp(), theta);
    let p = f.fiber_restrict(axis, fixed).map_err(|_| {
        Error::NearAmoeba(format!("fiber through {x:?} vanishes identically at angle {theta:.6}"))
    })?;
    let mut inside = 0i64;
    for w in p.roots() {
        let gap = w.norm().ln() - x[j];
        if gap.abs() < NEAR_TOLERANCE || !gap.is_finite() {
            return Err(Error::NearAmoeba(format!("root of modulus e^{:.9} at {x:?}", w.norm().ln())));
        }
        if gap < 0.0 {
            inside += 1;
        }
    }
    Ok(p.shift() + inside)
}

/// Order of the complement component containing `x`.
pub fn order_at(f: &LaurentPolynomial, x: [f64; 2], trials: usize) -> Result<OrderVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(point_seed(x));
    let mut out = [0i64; 2];
    for axis in [Axis::First, Axis::Second] {
        let mut seen: Option<i64> = None;
        for _ in 0..trials.max(1) {
            let theta = rng.random_range(0.0..TAU);
            let count = fiber_count(f, axis, x, theta)?;
            match seen {
                None => seen = Some(count),
                Some(c) if c != count => {
                    return Err(Error::NearAmoeba(format!(
                        "root counts {c} and {count} disagree along axis {} at {x:?}",
                        axis.index() + 1
                    )))
                }
                _ => {}
            }
        }
        out[axis.index()] = seen.expect("at least one trial");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::convex_hull;

    fn line() -> LaurentPolynomial {
        LaurentPolynomial::from_real(&[(1, 0, 1.0), (0, 1, 1.0), (0, 0, 1.0)]).unwrap()
    }

    #[test]
    fn line_orders() {
        assert_eq!(order_at(&line(), [3.0, 0.0], 8).unwrap(), [1, 0]);
        assert_eq!(order_at(&line(), [0.0, 3.0], 8).unwrap(), [0, 1]);
        assert_eq!(order_at(&line(), [-3.0, -3.0], 8).unwrap(), [0, 0]);
        assert!(matches!(order_at(&line(), [0.0, 0.0], 8), Err(Error::NearAmoeba(_))));
    }

    #[test]
    fn bounded_component_order() {
        let f = LaurentPolynomial::from_real(&[(2, 1, 1.0), (1, 2, 1.0), (1, 1, 5.0), (0, 0, 1.0)]).unwrap();
        // deep inside the bounded component: the middle monomial dominates
        assert_eq!(order_at(&f, [-0.8, -0.8], 8).unwrap(), [1, 1]);
        assert_eq!(order_at(&f, [-5.0, -5.0], 8).unwrap(), [0, 0]);
    }

    #[test]
    fn laurent_shift_is_respected() {
        // z1^-1 + z2^-1 + 1 : orders are vertices of conv{(-1,0),(0,-1),(0,0)}
        let f = LaurentPolynomial::from_real(&[(-1, 0, 1.0), (0, -1, 1.0), (0, 0, 1.0)]).unwrap();
        assert_eq!(order_at(&f, [-3.0, 0.0], 8).unwrap(), [-1, 0]);
        assert_eq!(order_at(&f, [3.0, 3.0], 8).unwrap(), [0, 0]);
    }

    #[test]
    fn orders_lie_in_newton_polygon() {
        let f = LaurentPolynomial::from_real(&[(2, 1, 1.0), (1, 2, 1.0), (1, 1, 5.0), (0, 0, 1.0)]).unwrap();
        let newton = convex_hull(&f.support()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let x = [rng.random_range(-6.0..6.0), rng.random_range(-6.0..6.0)];
            if let Ok(o) = order_at(&f, x, 8) {
                assert!(newton.contains(o));
            }
        }
    }
}
