//! Spines: tropical curves of the Ronkin-coefficient lift, and the
//! retraction experiment comparing neighbourhoods of two spines.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::amoeba::{
    connected_components, distance_to, order_at, raster::dilate, ronkin_coefficient, spread_cells, AmoebaRaster,
    RonkinCoefficient, Window, DEFAULT_TRIALS,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{convex_hull, mixed_volume, Point2};
use crate::laurent::LaurentPolynomial;
use crate::tropical::{stable_intersection, tropical_curve, TropicalCurve, TropicalPoly};

/// Interior samples per component used for its Ronkin coefficient.
pub const SAMPLES_PER_COMPONENT: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpineData {
    pub support: Vec<Point2>,
    pub coefficients: Vec<f64>,
    pub coefficient_spread: Vec<f64>,
    pub curve: TropicalCurve,
    /// False when some bounded component could not be resolved and was left out.
    pub complete: bool,
    pub warnings: Vec<String>,
}

impl SpineData {
    pub fn tropical_poly(&self) -> Result<TropicalPoly> {
        TropicalPoly::new(self.support.iter().copied().zip(self.coefficients.iter().copied()))
    }

    pub fn coefficient(&self, alpha: Point2) -> Option<f64> {
        self.support.iter().position(|a| *a == alpha).map(|k| self.coefficients[k])
    }
}

/// Sample points for the coefficient of one order: spread-out cells far from
/// the amoeba whose order is confirmed.
fn coefficient_samples(f: &LaurentPolynomial, r: &AmoebaRaster, ids: &[u32], alpha: Point2, dist: &[u32]) -> Vec<[f64; 2]> {
    let w = &r.window;
    let cells: Vec<usize> = (0..w.len())
        .filter(|&k| r.component_id[k].is_some_and(|c| ids.contains(&c)))
        .collect();
    spread_cells(w, &cells, dist, 4 * SAMPLES_PER_COMPONENT)
        .into_iter()
        .map(|c| w.center_of(c))
        .filter(|&x| order_at(f, x, DEFAULT_TRIALS) == Ok(alpha))
        .take(SAMPLES_PER_COMPONENT)
        .collect()
}

/// Spine from a labelled raster.
pub fn build_spine(f: &LaurentPolynomial, r: &AmoebaRaster, quad_n: usize, exec: Exec) -> Result<SpineData> {
    let mut warnings = Vec::new();
    let mut complete = true;
    let mut by_order: BTreeMap<Point2, Vec<u32>> = BTreeMap::new();
    for c in &r.components {
        match c.order {
            Some(o) => by_order.entry(o).or_default().push(c.id),
            None if c.touches_edge => return Err(Error::UnresolvedComponent(c.id)),
            None => {
                complete = false;
                warnings.push(format!("spine incomplete: bounded component {} has no resolved order", c.id));
            }
        }
    }
    let dist = distance_to(&r.window, &r.membership);
    let orders: Vec<(Point2, Vec<u32>)> = by_order.into_iter().collect();
    let coefficients: Vec<Result<RonkinCoefficient>> = exec.map(orders.len(), |k| {
        let (alpha, ids) = &orders[k];
        let samples = coefficient_samples(f, r, ids, *alpha, &dist);
        ronkin_coefficient(f, &samples, *alpha, quad_n, Exec::Sequential)
    });
    let mut support = Vec::new();
    let mut values = Vec::new();
    let mut spread = Vec::new();
    for ((alpha, _), c) in orders.iter().zip(coefficients) {
        let c = c?;
        support.push(*alpha);
        values.push(c.mean);
        spread.push(c.std_dev);
    }
    let poly = TropicalPoly::new(support.iter().copied().zip(values.iter().copied()))?;
    let curve = tropical_curve(&poly)?;

    let mut probes: Vec<[f64; 2]> = curve.vertices.clone();
    probes.extend(curve.edges.iter().map(|e| {
        let (a, b) = (curve.vertices[e.from], curve.vertices[e.to]);
        [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
    }));
    for p in probes {
        if r.member_at(p) == Some(false) {
            warnings.push(format!("raster too coarse: spine point ({:.4}, {:.4}) lies in a non-member cell", p[0], p[1]));
        }
    }
    for msg in &warnings {
        log::warn!("{msg}");
    }
    Ok(SpineData { support, coefficients: values, coefficient_spread: spread, curve, complete, warnings })
}

/// Cells within Chebyshev distance `radius` of the curve.
pub fn curve_neighborhood(curve: &TropicalCurve, w: &Window, radius: usize) -> Vec<bool> {
    let mut mask = vec![false; w.len()];
    let bounds = [w.x_min, w.x_max, w.y_min, w.y_max];
    for p in curve.sample_points(bounds, 0.25 * w.dx().min(w.dy())) {
        if let Some((i, j)) = w.cell_of(p) {
            mask[w.index(i, j)] = true;
        }
    }
    for _ in 0..radius {
        mask = dilate(w, &mask);
    }
    mask
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RetractionRow {
    pub epsilon: f64,
    pub components: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RetractionReport {
    pub rows: Vec<RetractionRow>,
    pub stable_points: usize,
    pub stable_multiplicity: u64,
    pub mixed_volume: i64,
}

/// Counts components of the intersection of the `eps`-neighbourhoods of two spines.
pub fn retract_experiment(spines: [&SpineData; 2], window: &Window, epsilons: &[f64], seed: u64) -> Result<RetractionReport> {
    if epsilons.is_empty() || epsilons.iter().any(|e| !(*e > 0.0)) || epsilons.windows(2).any(|p| p[1] >= p[0]) {
        return Err(Error::InvalidInput("epsilons must be positive and strictly decreasing".into()));
    }
    let cell = window.cell_size();
    let mut rows = Vec::new();
    for &eps in epsilons {
        if eps < cell {
            return Err(Error::EpsilonBelowResolution(eps));
        }
        let radius = (eps / cell).floor() as usize;
        let a = curve_neighborhood(&spines[0].curve, window, radius);
        let b = curve_neighborhood(&spines[1].curve, window, radius);
        let both: Vec<bool> = a.iter().zip(&b).map(|(x, y)| *x && *y).collect();
        let (_, comps) = connected_components(window, &both);
        rows.push(RetractionRow { epsilon: eps, components: comps.len() });
    }
    let stable = stable_intersection(&spines[0].curve, &spines[1].curve, seed)?;
    let p = convex_hull(&spines[0].support)?;
    let q = convex_hull(&spines[1].support)?;
    Ok(RetractionReport {
        rows,
        stable_points: stable.points.len(),
        stable_multiplicity: stable.total_multiplicity(),
        mixed_volume: mixed_volume(&p, &q).to_integer(),
    })
}
