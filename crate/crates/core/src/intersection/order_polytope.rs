//! The order polytope: convex hull of the order matrices of all vertices.

use std::collections::BTreeSet;

use serde::Serialize;

use super::assemble::{IntersectionReport, NewtonData, Verdict};
use super::vertices::OrderMatrix;
use crate::geometry::certify_vertices;
use crate::laurent::LaurentPolynomial;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderPolytope {
    /// Distinct order matrices of the vertices, sorted.
    pub points: Vec<OrderMatrix>,
    pub vertices: Vec<OrderMatrix>,
    /// Vertices of `New(f1) x New(f2)`.
    pub product_vertex_count: usize,
    /// Vertices of the order polytope that are also vertices of the product.
    pub shared_with_product: usize,
}

/// Computes the order polytope and appends its verdicts to the report.
pub fn order_polytope(report: &mut IntersectionReport, f: [&LaurentPolynomial; 2]) -> OrderPolytope {
    let newton = NewtonData::new(f);
    let points: Vec<OrderMatrix> =
        report.vertices.iter().map(|v| v.order_matrix).collect::<BTreeSet<_>>().into_iter().collect();
    let flat: Vec<[i64; 4]> = points.iter().map(OrderMatrix::flatten).collect();
    let vertices: Vec<OrderMatrix> =
        points.iter().zip(certify_vertices(&flat)).filter(|(_, v)| *v).map(|(m, _)| *m).collect();
    let product_vertex_count = newton.polytopes[0].vertices().len() * newton.polytopes[1].vertices().len();
    let shared_with_product = vertices.iter().filter(|m| newton.is_vertex_matrix(m)).count();

    let outside: Vec<&OrderMatrix> = points
        .iter()
        .filter(|m| !(newton.polytopes[0].contains(m.rows[0]) && newton.polytopes[1].contains(m.rows[1])))
        .collect();
    report.verdicts.push(Verdict::new(
        "order_polytope_containment",
        "Order polytope is a lattice polytope inside the Newton product",
        outside.is_empty(),
        format!("{} order matrices, {} outside New(f1) x New(f2)", points.len(), outside.len()),
    ));

    let hull_ms: BTreeSet<OrderMatrix> = report.hull_vertices.iter().map(|&k| report.vertices[k].order_matrix).collect();
    let vertex_set: BTreeSet<&OrderMatrix> = vertices.iter().collect();
    let good = hull_ms.iter().filter(|m| vertex_set.contains(m) && newton.is_vertex_matrix(m)).count();
    let (passed, detail) = match report.mixed_cones {
        Some(k) => (
            good == hull_ms.len() && good >= k,
            format!(
                "{good} of {} hull-vertex matrices are vertices of both the order polytope and the product; mixed cones {k}; order polytope has {} vertices, {shared_with_product} shared with the {product_vertex_count}-vertex product",
                hull_ms.len(),
                vertices.len()
            ),
        ),
        None => (false, "mixed cones unavailable".into()),
    };
    report.verdicts.push(Verdict::new("order_polytope_vertices", "Order polytope shares vertices with the Newton product", passed, detail));

    let cone_fail: Vec<&OrderMatrix> = hull_ms.iter().filter(|m| newton.cones_meet(m) != Some(true)).collect();
    report.verdicts.push(Verdict::new(
        "order_polytope_cones",
        "Shared vertices have meeting normal cones",
        cone_fail.is_empty(),
        format!("{} hull-vertex matrices, {} with normal cones not meeting", hull_ms.len(), cone_fail.len()),
    ));

    let op = OrderPolytope { points, vertices, product_vertex_count, shared_with_product };
    report.order_polytope = Some(op.clone());
    op
}
