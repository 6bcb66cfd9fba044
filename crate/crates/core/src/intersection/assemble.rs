//! Per-component records of the intersection and the structural checks on them.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::order_polytope::OrderPolytope;
use super::raster_ops::IntersectionGrid;
use super::vertices::{IntersectionVertex, OrderMatrix, RejectedVertex, VertexExtraction};
use crate::amoeba::{AmoebaRaster, Window};
use crate::geometry::{common_refinement, convex_hull, mixed_cones, mixed_volume, normal_fan, Fan2, LatticePolytope};
use crate::laurent::LaurentPolynomial;
use crate::tropical::StableIntersection;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One named check with a human-readable anchor naming the statement it tests.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub detail: String,
}

impl Verdict {
    pub fn new(id: &str, anchor: &str, passed: bool, detail: String) -> Self {
        let status = if passed { Status::Pass } else { Status::Fail };
        Verdict { id: id.into(), anchor: anchor.into(), status, detail }
    }

    pub fn skipped(id: &str, anchor: &str, detail: String) -> Self {
        Verdict { id: id.into(), anchor: anchor.into(), status: Status::Skipped, detail }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

/// Boundary cells of a component facing one complement component of one amoeba.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Face {
    /// 1 or 2.
    pub amoeba: usize,
    pub order: Option<[i64; 2]>,
    pub cell_count: usize,
    /// 8-connected pieces of the face cells; 1 when the face is a single arc.
    pub pieces: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentRecord {
    pub id: u32,
    pub cell_count: usize,
    pub bounded: bool,
    pub interior_cells: usize,
    pub vertices: Vec<IntersectionVertex>,
    pub faces: Vec<Face>,
    /// Hull of the vertex locations, counterclockwise.
    pub polytope: Vec<[f64; 2]>,
    /// Indices into `vertices` of the hull vertices.
    pub polytope_vertices: Vec<usize>,
    pub polytope_simple: bool,
    pub spine_hits: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntersectionReport {
    pub schema_version: u32,
    pub window: Window,
    pub components: Vec<ComponentRecord>,
    pub vertices: Vec<IntersectionVertex>,
    pub rejected_vertices: Vec<RejectedVertex>,
    /// Indices into `vertices` of the vertices of their convex hull.
    pub hull_vertices: Vec<usize>,
    pub order_polytope: Option<OrderPolytope>,
    pub mixed_volume: i64,
    pub bezout_product: i64,
    pub mixed_cones: Option<usize>,
    pub mixed_cells: Option<usize>,
    pub stable_points: Vec<[f64; 2]>,
    pub verdicts: Vec<Verdict>,
    pub warnings: Vec<String>,
}

impl IntersectionReport {
    pub fn verdict(&self, id: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.id == id)
    }

    pub fn all_pass(&self) -> bool {
        !self.verdicts.iter().any(Verdict::failed)
    }

    pub fn bounded_components(&self) -> usize {
        self.components.iter().filter(|c| c.bounded).count()
    }
}

/// Indices of the vertices of the convex hull of `pts`, counterclockwise;
/// collinear and repeated points are dropped.
pub fn hull_indices(pts: &[[f64; 2]]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| pts[a][0].total_cmp(&pts[b][0]).then(pts[a][1].total_cmp(&pts[b][1])).then(a.cmp(&b)));
    idx.dedup_by(|a, b| pts[*a] == pts[*b]);
    if idx.len() < 3 {
        return idx;
    }
    let scale = pts.iter().flat_map(|p| [p[0].abs(), p[1].abs()]).fold(1.0, f64::max);
    let tol = 1e-12 * scale * scale;
    let cross = |o: usize, a: usize, b: usize| {
        (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) - (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0])
    };
    let mut lower: Vec<usize> = Vec::new();
    for &p in &idx {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= tol {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &p in idx.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= tol {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn is_convex_ccw(poly: &[[f64; 2]]) -> bool {
    let n = poly.len();
    if n < 3 {
        return true;
    }
    (0..n).all(|i| {
        let (o, a, b) = (poly[i], poly[(i + 1) % n], poly[(i + 2) % n]);
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]) > 0.0
    })
}

/// Number of 8-connected pieces of a cell set.
fn pieces8(w: &Window, cells: &[usize]) -> usize {
    let set: BTreeSet<usize> = cells.iter().copied().collect();
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut pieces = 0;
    for &start in &set {
        if !seen.insert(start) {
            continue;
        }
        pieces += 1;
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            let (i, j) = w.coords(c);
            for dj in -1i64..=1 {
                for di in -1i64..=1 {
                    let (a, b) = (i as i64 + di, j as i64 + dj);
                    if a < 0 || b < 0 || a as usize >= w.nx || b as usize >= w.ny {
                        continue;
                    }
                    let n = w.index(a as usize, b as usize);
                    if set.contains(&n) && seen.insert(n) {
                        queue.push_back(n);
                    }
                }
            }
        }
    }
    pieces
}

fn faces_of(grid: &IntersectionGrid, rasters: [&AmoebaRaster; 2], cells: &[usize]) -> Vec<Face> {
    let w = &grid.window;
    let mut labels: BTreeMap<(usize, Option<[i64; 2]>), BTreeSet<usize>> = BTreeMap::new();
    for &c in cells {
        for n in w.neighbors4(c) {
            if grid.cells[n] {
                continue;
            }
            for (k, r) in rasters.iter().enumerate() {
                if !r.membership[n] {
                    let order = r.component_id[n].and_then(|id| r.component(id)).and_then(|comp| comp.order);
                    labels.entry((k + 1, order)).or_default().insert(c);
                }
            }
        }
    }
    labels
        .into_iter()
        .map(|((amoeba, order), set)| {
            let cells: Vec<usize> = set.into_iter().collect();
            Face { amoeba, order, cell_count: cells.len(), pieces: pieces8(w, &cells) }
        })
        .collect()
}

/// Inputs of [`assemble_components`], all computed on one window and seed.
pub struct AssemblyInput<'a> {
    pub polynomials: [&'a LaurentPolynomial; 2],
    pub rasters: [&'a AmoebaRaster; 2],
    pub grid: &'a IntersectionGrid,
    pub extraction: &'a VertexExtraction,
    /// Stable intersection of the two spines, or why it is unavailable.
    pub stable: std::result::Result<&'a StableIntersection, String>,
    pub degenerate: bool,
}

pub(crate) struct NewtonData {
    pub polytopes: [LatticePolytope; 2],
    pub fans: Option<[Fan2; 2]>,
}

impl NewtonData {
    pub(crate) fn new(f: [&LaurentPolynomial; 2]) -> Self {
        let p = |g: &LaurentPolynomial| convex_hull(&g.support()).expect("polynomials have terms");
        let polytopes = [p(f[0]), p(f[1])];
        let fans = match (normal_fan(&polytopes[0]), normal_fan(&polytopes[1])) {
            (Ok(a), Ok(b)) => Some([a, b]),
            _ => None,
        };
        NewtonData { polytopes, fans }
    }

    pub(crate) fn is_vertex_matrix(&self, m: &OrderMatrix) -> bool {
        self.polytopes[0].is_vertex(m.rows[0]) && self.polytopes[1].is_vertex(m.rows[1])
    }

    /// Whether the normal cones of the two rows share an open region.
    pub(crate) fn cones_meet(&self, m: &OrderMatrix) -> Option<bool> {
        let fans = self.fans.as_ref()?;
        let a = fans[0].cone_of_vertex(0, m.rows[0])?;
        let b = fans[1].cone_of_vertex(0, m.rows[1])?;
        Some(a.meets_full_dimensionally(&b))
    }
}

fn fmt_matrix(m: &OrderMatrix) -> String {
    format!("(({},{}),({},{}))", m.rows[0][0], m.rows[0][1], m.rows[1][0], m.rows[1][1])
}

fn all_distinct(ms: &[OrderMatrix]) -> bool {
    let set: BTreeSet<&OrderMatrix> = ms.iter().collect();
    set.len() == ms.len()
}

/// Builds the component records and the structural verdicts.
pub fn assemble_components(input: &AssemblyInput) -> IntersectionReport {
    let AssemblyInput { polynomials: f, rasters, grid, extraction, degenerate, .. } = *input;
    let w = grid.window;
    let newton = NewtonData::new(f);
    let mut warnings = Vec::new();

    let mut vertices = extraction.vertices.clone();
    for v in &mut vertices {
        v.component = grid.component_near(v.location, 4);
        if v.component.is_none() {
            warnings.push(format!("vertex at ({:.4}, {:.4}) is not next to any intersection component", v.location[0], v.location[1]));
        }
    }
    let (stable_points, mixed_cells) = match input.stable {
        Ok(s) => (s.points.iter().map(|p| p.location).collect::<Vec<_>>(), Some(s.mixed_cell_count)),
        Err(ref e) => {
            warnings.push(format!("stable intersection of the spines unavailable: {e}"));
            (Vec::new(), None)
        }
    };

    let per_component: Vec<ComponentRecord> = grid
        .components
        .iter()
        .map(|c| {
            let vs: Vec<IntersectionVertex> = vertices.iter().filter(|v| v.component == Some(c.id)).cloned().collect();
            let locs: Vec<[f64; 2]> = vs.iter().map(|v| v.location).collect();
            let hull = hull_indices(&locs);
            let polytope: Vec<[f64; 2]> = hull.iter().map(|&k| locs[k]).collect();
            let spine_hits = stable_points.iter().copied().filter(|&p| grid.component_near(p, 1) == Some(c.id)).collect();
            ComponentRecord {
                id: c.id,
                cell_count: c.cell_count,
                bounded: !c.unbounded_in_window,
                interior_cells: c.interior_cells,
                faces: faces_of(grid, rasters, &c.cells),
                polytope_simple: is_convex_ccw(&polytope),
                polytope,
                polytope_vertices: hull,
                vertices: vs,
                spine_hits,
            }
        })
        .collect();

    let locs: Vec<[f64; 2]> = vertices.iter().map(|v| v.location).collect();
    let hull_vertices = hull_indices(&locs);
    let mv = mixed_volume(&newton.polytopes[0], &newton.polytopes[1]).to_integer();
    let bezout = f[0].total_degree() * f[1].total_degree();
    let mixed_cones = newton.fans.as_ref().and_then(|[a, b]| mixed_cones(&common_refinement(a, b)).ok().map(|m| m.len()));

    let mut verdicts = Vec::new();
    let n_all = per_component.len();
    let n_bounded = per_component.iter().filter(|c| c.bounded).count();

    // Bernstein bound
    verdicts.push(match mixed_cells {
        Some(m) => Verdict::new(
            "bernstein",
            "Amoeba Bernstein bound",
            n_bounded <= m && m as i64 <= mv,
            format!(
                "{n_bounded} bounded components <= {m} mixed cells <= mixed volume {mv}; {} components touch the window edge and are not counted",
                n_all - n_bounded
            ),
        ),
        None => Verdict::new("bernstein", "Amoeba Bernstein bound", false, "spine stable intersection unavailable".into()),
    });

    verdicts.push(Verdict::new(
        "bezout",
        "Amoeba Bezout bound",
        n_all as i64 <= bezout,
        format!("{n_all} components <= product of total degrees {bezout}"),
    ));

    let missing: Vec<u32> = per_component.iter().filter(|c| c.spine_hits.is_empty()).map(|c| c.id).collect();
    verdicts.push(if mixed_cells.is_none() {
        Verdict::new("spine_hit", "Spines meet every intersection component", false, "spine stable intersection unavailable".into())
    } else {
        Verdict::new(
            "spine_hit",
            "Spines meet every intersection component",
            missing.is_empty(),
            if missing.is_empty() {
                format!("all {n_all} components contain a stable intersection point")
            } else {
                format!("components {missing:?} contain no stable intersection point")
            },
        )
    });
    let in_window: Vec<[f64; 2]> = stable_points.iter().copied().filter(|p| w.contains(*p)).collect();
    let outside_i: Vec<[f64; 2]> = in_window.iter().copied().filter(|&p| grid.component_near(p, 1).is_none()).collect();
    verdicts.push(Verdict::new(
        "spine_points_inside",
        "Stable spine intersection lies in the amoeba intersection",
        outside_i.is_empty(),
        format!(
            "{} of {} stable points in the window lie in intersection cells ({} outside the window)",
            in_window.len() - outside_i.len(),
            in_window.len(),
            stable_points.len() - in_window.len()
        ),
    ));

    // order injectivity
    let mut bad: Vec<u32> = Vec::new();
    for c in &per_component {
        let ms: Vec<OrderMatrix> = c.polytope_vertices.iter().map(|&k| c.vertices[k].order_matrix).collect();
        if !all_distinct(&ms) {
            bad.push(c.id);
        }
    }
    let hull_ms: Vec<OrderMatrix> = hull_vertices.iter().map(|&k| vertices[k].order_matrix).collect();
    let global_ok = all_distinct(&hull_ms);
    verdicts.push(Verdict::new(
        "order_injectivity",
        "Order map is injective on intersection polytope vertices",
        bad.is_empty() && global_ok,
        format!(
            "repeated matrices on polytope vertices of components {bad:?}; hull of all vertices {}",
            if global_ok { "injective" } else { "not injective" }
        ),
    ));

    // mixed cone correspondence
    let newton_rows = hull_ms.iter().filter(|m| newton.is_vertex_matrix(m)).count();
    verdicts.push(match mixed_cones {
        Some(k) => Verdict::new(
            "mixed_cones",
            "Hull vertices of the vertex set correspond to mixed cones",
            hull_vertices.len() == k && newton_rows == hull_vertices.len(),
            format!(
                "hull of the vertex set has {} vertices, {newton_rows} with Newton-vertex rows; common refinement has {k} mixed cones",
                hull_vertices.len()
            ),
        ),
        None => Verdict::new(
            "mixed_cones",
            "Hull vertices of the vertex set correspond to mixed cones",
            false,
            "a Newton polytope is not two-dimensional, so no normal fan".into(),
        ),
    });

    // normal cone spot check
    let mut checked = 0;
    let mut failing: Vec<String> = Vec::new();
    for m in hull_ms.iter().filter(|m| newton.is_vertex_matrix(m)) {
        checked += 1;
        if newton.cones_meet(m) != Some(true) {
            failing.push(fmt_matrix(m));
        }
    }
    verdicts.push(Verdict::new(
        "normal_cones",
        "Normal cones of hull-vertex orders meet",
        failing.is_empty(),
        format!("{checked} hull vertices checked; cones fail to meet for {failing:?}"),
    ));

    // faces
    let mut problems: Vec<String> = Vec::new();
    let mut notes: Vec<String> = Vec::new();
    for c in &per_component {
        if c.vertices.is_empty() {
            problems.push(format!("component {} has no vertices", c.id));
        }
        for k in 1..=2 {
            let orders: BTreeSet<[i64; 2]> = c.faces.iter().filter(|x| x.amoeba == k).filter_map(|x| x.order).collect();
            if orders.len() < 2 {
                let msg = format!("component {} sees {} complement components of amoeba {k}", c.id, orders.len());
                // an unbounded component can be cut off by the window or by non-transverse spines
                if c.bounded {
                    problems.push(msg);
                } else {
                    notes.push(msg);
                }
            }
        }
    }
    verdicts.push(Verdict::new(
        "component_faces",
        "Each amoeba bounds every component with two complement components",
        problems.is_empty(),
        match (problems.is_empty(), notes.is_empty()) {
            (true, true) => "every component has vertices and faces from two complement components of each amoeba".into(),
            (true, false) => format!("bounded components pass; not counted for unbounded components: {}", notes.join("; ")),
            _ => problems.join("; "),
        },
    ));

    let split: Vec<String> = per_component
        .iter()
        .flat_map(|c| {
            c.faces
                .iter()
                .filter(|x| x.pieces != 1 || x.order.is_none())
                .map(move |x| format!("component {} amoeba {} order {:?}: {} pieces", c.id, x.amoeba, x.order, x.pieces))
        })
        .collect();
    verdicts.push(Verdict::new(
        "face_labels",
        "Faces carry a unique complement component",
        split.is_empty(),
        if split.is_empty() { "every face is one labelled arc".into() } else { split.join("; ") },
    ));

    verdicts.push(if degenerate {
        Verdict::skipped("dimension", "Intersection components are two-dimensional", "degenerate mode: membership is thin by construction".into())
    } else {
        let flat: Vec<u32> = per_component.iter().filter(|c| c.interior_cells == 0).map(|c| c.id).collect();
        Verdict::new(
            "dimension",
            "Intersection components are two-dimensional",
            flat.is_empty(),
            format!("components without an interior cell: {flat:?}"),
        )
    });

    IntersectionReport {
        schema_version: SCHEMA_VERSION,
        window: w,
        components: per_component,
        vertices,
        rejected_vertices: extraction.rejected.clone(),
        hull_vertices,
        order_polytope: None,
        mixed_volume: mv,
        bezout_product: bezout,
        mixed_cones,
        mixed_cells,
        stable_points,
        verdicts,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_points() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [0.5, 0.5], [1.0, 1.0], [0.0, 1.0], [0.5, 0.0]];
        let h = hull_indices(&pts);
        assert_eq!(h, vec![0, 1, 3, 4]);
        let poly: Vec<[f64; 2]> = h.iter().map(|&k| pts[k]).collect();
        assert!(is_convex_ccw(&poly));
        assert_eq!(hull_indices(&[[1.0, 1.0]]), vec![0]);
        assert_eq!(hull_indices(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).len(), 2);
    }

    #[test]
    fn face_pieces() {
        let w = Window::square(0.0, 1.0, 10).unwrap();
        assert_eq!(pieces8(&w, &[0, 11, 22]), 1);
        assert_eq!(pieces8(&w, &[0, 2]), 2);
        assert_eq!(pieces8(&w, &[]), 0);
    }
}
