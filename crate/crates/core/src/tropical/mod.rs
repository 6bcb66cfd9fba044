//! Max-plus tropical polynomials, their plane curves and stable intersections.

pub mod curve;
pub mod stable;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::laurent::LaurentPolynomial;

pub use curve::{tropical_curve, CurveEdge, CurveRay, TropicalCurve};
pub use stable::{
    limit_directions, stable_intersection, tropical_bernstein_count, MixedCell, StableIntersection,
    StableIntersectionPoint,
};

/// Ties closer than this are reported as attaining the maximum.
pub const ARGMAX_TOLERANCE: f64 = 1e-9;

/// `max_a (b_a + <x, a>)` over a finite support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TropicalPoly {
    support: Vec<Point2>,
    coefficients: Vec<f64>,
}

impl TropicalPoly {
    pub fn new(terms: impl IntoIterator<Item = (Point2, f64)>) -> Result<Self> {
        let (support, coefficients): (Vec<Point2>, Vec<f64>) = terms.into_iter().unzip();
        if support.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let distinct: BTreeSet<Point2> = support.iter().copied().collect();
        if distinct.len() != support.len() {
            return Err(Error::DuplicateSupport);
        }
        if coefficients.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidInput("tropical coefficients must be finite".into()));
        }
        Ok(Self { support, coefficients })
    }

    /// Lift by `log |lambda_a|`, the usual first approximation of the spine.
    pub fn from_coefficient_logs(f: &LaurentPolynomial) -> Self {
        Self {
            support: f.support(),
            coefficients: f.terms().map(|(_, c)| c.norm().ln()).collect(),
        }
    }

    pub fn support(&self) -> &[Point2] {
        &self.support
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn terms(&self) -> impl Iterator<Item = (Point2, f64)> + '_ {
        self.support.iter().copied().zip(self.coefficients.iter().copied())
    }

    /// Adds `c` to every coefficient (tropical multiplication by a scalar).
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            support: self.support.clone(),
            coefficients: self.coefficients.iter().map(|b| b + c).collect(),
        }
    }
}

/// The maximum and every support point attaining it within [`ARGMAX_TOLERANCE`].
pub fn tropical_eval(h: &TropicalPoly, x: [f64; 2]) -> (f64, Vec<Point2>) {
    let values: Vec<f64> = h
        .terms()
        .map(|(a, b)| b + x[0] * a[0] as f64 + x[1] * a[1] as f64)
        .collect();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let argmax = h
        .support
        .iter()
        .zip(&values)
        .filter(|(_, v)| max - **v <= ARGMAX_TOLERANCE)
        .map(|(a, _)| *a)
        .collect();
    (max, argmax)
}
