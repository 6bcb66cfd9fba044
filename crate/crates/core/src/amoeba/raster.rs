//! Painting amoeba membership by solving along torus fibers.
//!
//! Along a grid line with one log-coordinate fixed, the amoeba slice is the
//! union of the ranges swept by `log |w(theta)|` for the roots `w` of the
//! fiber polynomial as the fixed coordinate's angle `theta` turns once. Roots
//! at consecutive angles are matched, and every cell whose center lies between
//! two matched log-moduli is a member by the intermediate value theorem.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::window::Window;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::laurent::{Axis, LaurentPolynomial};

/// Angle intervals are bisected at most this many times when root matching is ambiguous.
const MAX_BISECTIONS: u32 = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplementComponent {
    pub id: u32,
    pub cell_count: usize,
    pub touches_edge: bool,
    pub order: Option<[i64; 2]>,
    /// Cell center at which the order was evaluated.
    pub sample: Option<[f64; 2]>,
}

/// Sampled membership grid plus, once labelled, complement components.
#[derive(Clone, Debug, PartialEq)]
pub struct AmoebaRaster {
    pub window: Window,
    pub membership: Vec<bool>,
    /// Complement component of each non-member cell.
    pub component_id: Vec<Option<u32>>,
    pub components: Vec<ComplementComponent>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RasterOptions {
    pub angle_samples: usize,
    pub seed: u64,
    pub exec: Exec,
    /// Close one-cell pinholes with a 3x3 closing.
    pub closing: bool,
    /// Extra dilation in cells, used for measure-zero amoebas.
    pub fatten: usize,
}

impl Default for RasterOptions {
    fn default() -> Self {
        RasterOptions { angle_samples: 256, seed: 0, exec: Exec::default(), closing: true, fatten: 0 }
    }
}

pub fn raster_amoeba(f: &LaurentPolynomial, window: &Window, angle_samples: usize, seed: u64) -> Result<AmoebaRaster> {
    raster_amoeba_with(f, window, &RasterOptions { angle_samples, seed, ..RasterOptions::default() })
}

pub fn raster_amoeba_with(f: &LaurentPolynomial, window: &Window, opts: &RasterOptions) -> Result<AmoebaRaster> {
    window.validate()?;
    if opts.angle_samples < 16 {
        return Err(Error::InvalidInput(format!("angle_samples must be at least 16, got {}", opts.angle_samples)));
    }
    let mut raster = AmoebaRaster::empty(*window);
    if f.is_monomial() {
        log::warn!("monomial {f} has an empty amoeba");
        raster.warnings.push("monomial input: empty amoeba".into());
        return Ok(raster);
    }
    let (nx, ny) = (window.nx, window.ny);
    // rows: x2 fixed, solve for z1
    let rows = opts.exec.map(ny, |j| {
        let centers: Vec<f64> = (0..nx).map(|i| window.col_center(i)).collect();
        paint_line(f, Axis::First, window.row_center(j), &centers, line_seed(opts.seed, 0, j), opts.angle_samples)
    });
    let cols = opts.exec.map(nx, |i| {
        let centers: Vec<f64> = (0..ny).map(|j| window.row_center(j)).collect();
        paint_line(f, Axis::Second, window.col_center(i), &centers, line_seed(opts.seed, 1, i), opts.angle_samples)
    });
    for j in 0..ny {
        for i in 0..nx {
            raster.membership[window.index(i, j)] = rows[j][i] || cols[i][j];
        }
    }
    if opts.closing {
        raster.membership = close(window, &raster.membership);
    }
    for _ in 0..opts.fatten {
        raster.membership = dilate(window, &raster.membership);
    }
    Ok(raster)
}

fn line_seed(seed: u64, axis: u64, line: usize) -> u64 {
    seed ^ (axis << 62) ^ (line as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// `(log-distance, angle-wrapped)` metric, scale-free for roots near 0 or infinity.
fn log_dist(a: Complex64, b: Complex64) -> f64 {
    let dl = a.norm().ln() - b.norm().ln();
    let mut da = (a.arg() - b.arg()).abs();
    if da > std::f64::consts::PI {
        da = TAU - da;
    }
    (dl * dl + da * da).sqrt()
}

/// Best assignment `a[i] -> b[perm[i]]` by total squared distance.
fn match_roots(a: &[Complex64], b: &[Complex64]) -> Vec<usize> {
    let n = a.len();
    if n <= 5 {
        let mut best = (f64::INFINITY, (0..n).collect::<Vec<_>>());
        let mut perm: Vec<usize> = (0..n).collect();
        permute(&mut perm, 0, &mut |p| {
            let cost: f64 = p.iter().enumerate().map(|(i, &k)| log_dist(a[i], b[k]).powi(2)).sum();
            if cost < best.0 {
                best = (cost, p.to_vec());
            }
        });
        return best.1;
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (i, x) in a.iter().enumerate() {
        for (k, y) in b.iter().enumerate() {
            pairs.push((log_dist(*x, *y), i, k));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut out = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for (_, i, k) in pairs {
        if out[i] == usize::MAX && !used[k] {
            out[i] = k;
            used[k] = true;
        }
    }
    out
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

struct LineSolver<'a> {
    f: &'a LaurentPolynomial,
    free: Axis,
    fixed_log: f64,
    cell: f64,
    intervals: Vec<(f64, f64)>,
    samples: Vec<f64>,
}

impl LineSolver<'_> {
    fn solve(&mut self, theta: f64) -> Option<Vec<Complex64>> {
        let fixed = Complex64::from_polar(self.fixed_log.exp(), theta);
        let roots = self.f.fiber_restrict(self.free, fixed).ok()?.roots();
        self.samples.extend(roots.iter().map(|w| w.norm().ln()));
        Some(roots)
    }

    fn connect(&mut self, ta: f64, a: &[Complex64], tb: f64, b: &[Complex64], depth: u32) {
        if a.len() != b.len() {
            // a root escapes to 0 or infinity in between
            if depth < MAX_BISECTIONS {
                self.bisect(ta, a, tb, b, depth);
            }
            return;
        }
        if a.is_empty() {
            return;
        }
        let perm = match_roots(a, b);
        let ambiguous = (0..a.len()).any(|i| {
            let moved = log_dist(a[i], b[perm[i]]);
            let separation = (0..a.len())
                .filter(|&j| j != i)
                .map(|j| log_dist(a[i], a[j]))
                .fold(f64::INFINITY, f64::min);
            moved > 0.3 * separation && moved > 0.5 * self.cell
        });
        if ambiguous && depth < MAX_BISECTIONS {
            self.bisect(ta, a, tb, b, depth);
            return;
        }
        for (i, &k) in perm.iter().enumerate() {
            let (la, lb) = (a[i].norm().ln(), b[k].norm().ln());
            if !ambiguous || (la - lb).abs() <= 2.0 * self.cell {
                self.intervals.push((la.min(lb), la.max(lb)));
            }
        }
    }

    fn bisect(&mut self, ta: f64, a: &[Complex64], tb: f64, b: &[Complex64], depth: u32) {
        let tm = 0.5 * (ta + tb);
        if let Some(m) = self.solve(tm) {
            self.connect(ta, a, tm, &m, depth + 1);
            self.connect(tm, &m, tb, b, depth + 1);
        }
    }
}

/// Membership of the cells along one grid line.
fn paint_line(f: &LaurentPolynomial, free: Axis, fixed_log: f64, centers: &[f64], seed: u64, samples: usize) -> Vec<bool> {
    let n = centers.len();
    let cell = if n > 1 { centers[1] - centers[0] } else { 1.0 };
    let lo = centers[0] - 0.5 * cell;
    let phase: f64 = ChaCha8Rng::seed_from_u64(seed).random_range(0.0..TAU / samples as f64);
    let mut solver = LineSolver { f, free, fixed_log, cell, intervals: Vec::new(), samples: Vec::new() };
    let angles: Vec<f64> = (0..=samples).map(|k| phase + TAU * k as f64 / samples as f64).collect();
    let mut roots: Vec<Option<Vec<Complex64>>> = Vec::with_capacity(samples + 1);
    for (k, &t) in angles.iter().enumerate() {
        if k == samples {
            // same fiber as k = 0, but keep the angle continuous
            roots.push(roots[0].clone());
        } else {
            roots.push(solver.solve(t));
        }
    }
    for k in 0..samples {
        if let (Some(a), Some(b)) = (&roots[k], &roots[k + 1]) {
            solver.connect(angles[k], a, angles[k + 1], b, 0);
        }
    }

    let mut member = vec![false; n];
    let col = |x: f64| -> Option<usize> {
        let t = (x - lo) / cell;
        (t >= 0.0 && t < n as f64).then_some(t as usize)
    };
    for &(a, b) in &solver.intervals {
        // centers c_i = lo + (i + 0.5) cell within [a, b]
        let first = ((a - lo) / cell - 0.5).ceil().max(0.0);
        let last = ((b - lo) / cell - 0.5).floor().min(n as f64 - 1.0);
        if first <= last {
            for m in member.iter_mut().take(last as usize + 1).skip(first as usize) {
                *m = true;
            }
        }
    }
    let filled = member.clone();
    for &s in &solver.samples {
        if let Some(i) = col(s) {
            let near = filled[i.saturating_sub(1)..=(i + 1).min(n - 1)].iter().any(|&m| m);
            if !near {
                member[i] = true;
            }
        }
    }
    member
}

/// 3x3 dilation.
pub fn dilate(w: &Window, m: &[bool]) -> Vec<bool> {
    let mut out = m.to_vec();
    for j in 0..w.ny {
        for i in 0..w.nx {
            if m[w.index(i, j)] {
                continue;
            }
            'search: for dj in -1i64..=1 {
                for di in -1i64..=1 {
                    let (a, b) = (i as i64 + di, j as i64 + dj);
                    if a >= 0 && b >= 0 && (a as usize) < w.nx && (b as usize) < w.ny && m[w.index(a as usize, b as usize)] {
                        out[w.index(i, j)] = true;
                        break 'search;
                    }
                }
            }
        }
    }
    out
}

/// 3x3 erosion; cells beyond the window count as members.
pub fn erode(w: &Window, m: &[bool]) -> Vec<bool> {
    let mut out = m.to_vec();
    for j in 0..w.ny {
        for i in 0..w.nx {
            if !m[w.index(i, j)] {
                continue;
            }
            'search: for dj in -1i64..=1 {
                for di in -1i64..=1 {
                    let (a, b) = (i as i64 + di, j as i64 + dj);
                    if a >= 0 && b >= 0 && (a as usize) < w.nx && (b as usize) < w.ny && !m[w.index(a as usize, b as usize)] {
                        out[w.index(i, j)] = false;
                        break 'search;
                    }
                }
            }
        }
    }
    out
}

pub fn close(w: &Window, m: &[bool]) -> Vec<bool> {
    let closed = erode(w, &dilate(w, m));
    // closing never removes original members
    let closed: Vec<bool> = closed.iter().zip(m).map(|(a, b)| *a || *b).collect();
    bridge_diagonals(w, &closed)
}

/// Adds one cell to every 2x2 block whose members touch only diagonally, so
/// sub-cell bands stay 4-connected.
pub fn bridge_diagonals(w: &Window, m: &[bool]) -> Vec<bool> {
    let mut out = m.to_vec();
    for j in 0..w.ny.saturating_sub(1) {
        for i in 0..w.nx.saturating_sub(1) {
            let (a, b, c, d) = (m[w.index(i, j)], m[w.index(i + 1, j)], m[w.index(i + 1, j + 1)], m[w.index(i, j + 1)]);
            if a && c && !b && !d {
                out[w.index(i + 1, j)] = true;
            } else if b && d && !a && !c {
                out[w.index(i, j)] = true;
            }
        }
    }
    out
}

impl AmoebaRaster {
    pub fn empty(window: Window) -> Self {
        AmoebaRaster {
            window,
            membership: vec![false; window.len()],
            component_id: vec![None; window.len()],
            components: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn is_member(&self, i: usize, j: usize) -> bool {
        self.membership[self.window.index(i, j)]
    }

    /// Membership of the cell containing `p`; `None` outside the window.
    pub fn member_at(&self, p: [f64; 2]) -> Option<bool> {
        let (i, j) = self.window.cell_of(p)?;
        Some(self.is_member(i, j))
    }

    pub fn member_count(&self) -> usize {
        self.membership.iter().filter(|&&m| m).count()
    }

    /// Component id of the cell containing `p`.
    pub fn component_at(&self, p: [f64; 2]) -> Option<u32> {
        let (i, j) = self.window.cell_of(p)?;
        self.component_id[self.window.index(i, j)]
    }

    pub fn component(&self, id: u32) -> Option<&ComplementComponent> {
        self.components.iter().find(|c| c.id == id)
    }

    /// Orders of all resolved components.
    pub fn component_orders(&self) -> Vec<(u32, [i64; 2])> {
        self.components.iter().filter_map(|c| c.order.map(|o| (c.id, o))).collect()
    }

    /// Run lengths of alternating non-member / member cells in index order.
    pub fn membership_runs(&self) -> Vec<usize> {
        let mut runs = Vec::new();
        let mut current = false;
        let mut len = 0;
        for &m in &self.membership {
            if m == current {
                len += 1;
            } else {
                runs.push(len);
                current = m;
                len = 1;
            }
        }
        runs.push(len);
        runs
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "window": self.window,
            "membership_runs": self.membership_runs(),
            "components": self.components,
            "warnings": self.warnings,
        })
    }
}
