//! Complement components of a raster and their orders.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::order::{order_at, DEFAULT_TRIALS};
use super::raster::{AmoebaRaster, ComplementComponent};
use super::window::Window;
use crate::exec::Exec;
use crate::geometry::convex_hull;
use crate::laurent::LaurentPolynomial;

/// How many cells per component are tried before giving up.
pub const MAX_CANDIDATES: usize = 12;
/// Successful evaluations that must agree before an order is accepted.
const CONFIRMATIONS: usize = 3;

/// 4-connected components of the cells where `mask` is true, in scan order.
pub fn connected_components(w: &Window, mask: &[bool]) -> (Vec<Option<u32>>, Vec<Vec<usize>>) {
    let mut id = vec![None; mask.len()];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..mask.len() {
        if !mask[start] || id[start].is_some() {
            continue;
        }
        let label = comps.len() as u32;
        let mut cells = Vec::new();
        id[start] = Some(label);
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            cells.push(c);
            for nb in w.neighbors4(c) {
                if mask[nb] && id[nb].is_none() {
                    id[nb] = Some(label);
                    queue.push_back(nb);
                }
            }
        }
        cells.sort_unstable();
        comps.push(cells);
    }
    (id, comps)
}

/// 4-step distance from each cell to the nearest cell where `source` is true.
pub fn distance_to(w: &Window, source: &[bool]) -> Vec<u32> {
    let mut dist = vec![u32::MAX; source.len()];
    let mut queue = VecDeque::new();
    for (k, &s) in source.iter().enumerate() {
        if s {
            dist[k] = 0;
            queue.push_back(k);
        }
    }
    while let Some(c) = queue.pop_front() {
        for nb in w.neighbors4(c) {
            if dist[nb] == u32::MAX {
                dist[nb] = dist[c] + 1;
                queue.push_back(nb);
            }
        }
    }
    dist
}

/// Up to `max` cells of a component far from the amoeba, pairwise at least
/// three cells apart, farthest first.
pub fn spread_cells(w: &Window, cells: &[usize], dist: &[u32], max: usize) -> Vec<usize> {
    let mut sorted = cells.to_vec();
    sorted.sort_by(|a, b| dist[*b].cmp(&dist[*a]).then(a.cmp(b)));
    let mut chosen: Vec<usize> = Vec::new();
    for c in sorted {
        let (i, j) = w.coords(c);
        let far = chosen.iter().all(|&o| {
            let (a, b) = w.coords(o);
            i.abs_diff(a).max(j.abs_diff(b)) >= 3
        });
        if far {
            chosen.push(c);
            if chosen.len() == max {
                break;
            }
        }
    }
    chosen
}

/// Flood-fills the complement and evaluates the order of every component.
pub fn label_components(mut raster: AmoebaRaster, f: &LaurentPolynomial, exec: Exec) -> AmoebaRaster {
    let w = raster.window;
    let complement: Vec<bool> = raster.membership.iter().map(|m| !m).collect();
    let (ids, comps) = connected_components(&w, &complement);
    let dist = distance_to(&w, &raster.membership);
    let newton = convex_hull(&f.support()).expect("polynomial has terms");

    let resolved = exec.map(comps.len(), |k| {
        let mut found: Vec<([i64; 2], [f64; 2])> = Vec::new();
        for c in spread_cells(&w, &comps[k], &dist, MAX_CANDIDATES) {
            let x = w.center_of(c);
            if let Ok(o) = order_at(f, x, DEFAULT_TRIALS) {
                if newton.contains(o) {
                    found.push((o, x));
                    if found.len() == CONFIRMATIONS {
                        break;
                    }
                }
            }
        }
        match found.first() {
            Some(&(o, x)) if found.iter().all(|(p, _)| *p == o) => (Some(o), Some(x)),
            _ => (None, None),
        }
    });

    raster.component_id = ids;
    raster.components = comps
        .iter()
        .zip(resolved)
        .enumerate()
        .map(|(k, (cells, (order, sample)))| ComplementComponent {
            id: k as u32,
            cell_count: cells.len(),
            touches_edge: cells.iter().any(|&c| {
                let (i, j) = w.coords(c);
                w.on_edge(i, j)
            }),
            order,
            sample,
        })
        .collect();

    for c in &raster.components {
        if c.order.is_none() {
            raster.warnings.push(format!("complement component {} ({} cells) is unresolved", c.id, c.cell_count));
        }
    }
    for v in newton.vertices() {
        if !raster.components.iter().any(|c| c.order == Some(*v)) {
            raster.warnings.push(format!("no component carries the Newton vertex order {v:?}"));
        }
    }
    for c in &raster.components {
        if let Some(o) = c.order {
            if c.touches_edge && !newton.is_vertex(o) {
                log::info!("component {} of order {o:?} reaches the window edge", c.id);
            }
        }
    }
    for msg in &raster.warnings {
        log::warn!("{msg}");
    }
    raster
}

/// Result of re-evaluating the order at random points of labelled components.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct OrderConstancy {
    pub checked: usize,
    /// Points whose order differs from their component label.
    pub violations: Vec<([f64; 2], [i64; 2], [i64; 2])>,
    /// Points where the order could not be evaluated.
    pub unresolved: usize,
}

/// Draws `samples` random points from complement cells at least `margin`
/// cells away from the amoeba and compares `order_at` with the label.
pub fn order_constancy(f: &LaurentPolynomial, r: &AmoebaRaster, samples: usize, margin: u32, seed: u64, exec: Exec) -> OrderConstancy {
    let w = r.window;
    let dist = distance_to(&w, &r.membership);
    let pool: Vec<(usize, [i64; 2])> = (0..w.len())
        .filter(|&c| dist[c] >= margin)
        .filter_map(|c| r.component_id[c].and_then(|id| r.component(id)).and_then(|k| k.order).map(|o| (c, o)))
        .collect();
    if pool.is_empty() {
        return OrderConstancy::default();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks: Vec<([f64; 2], [i64; 2])> = (0..samples)
        .map(|_| {
            let (c, o) = pool[rng.random_range(0..pool.len())];
            let p = w.center_of(c);
            let jitter = [rng.random_range(-0.5..0.5) * w.dx(), rng.random_range(-0.5..0.5) * w.dy()];
            ([p[0] + jitter[0], p[1] + jitter[1]], o)
        })
        .collect();
    let found = exec.map(picks.len(), |k| order_at(f, picks[k].0, DEFAULT_TRIALS));
    let mut out = OrderConstancy { checked: picks.len(), ..Default::default() };
    for ((p, expected), got) in picks.into_iter().zip(found) {
        match got {
            Ok(o) if o != expected => out.violations.push((p, expected, o)),
            Ok(_) => {}
            Err(_) => out.unresolved += 1,
        }
    }
    out
}
