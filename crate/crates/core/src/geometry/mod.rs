//! Exact lattice polygon geometry: hulls, Minkowski sums, volumes, normal fans.

pub mod fan;
pub mod polygon;
pub mod vertex_lp;

pub use fan::{common_refinement, mixed_cones, normal_fan, Cone2, FaceRef, Fan2, FanCone};
pub use polygon::{convex_hull, minkowski_sum, mixed_volume, normalized_volume, LatticePolytope, Point2};
pub use vertex_lp::certify_vertices;
