//! Intersection of two amoebas: components, vertices, faces, intersection
//! polytopes, order matrices and the checks relating them to Newton data.

pub mod assemble;
pub mod contour;
pub mod genericity;
pub mod order_polytope;
pub mod pipeline;
pub mod raster_ops;
pub mod vertices;

pub use assemble::{
    assemble_components, hull_indices, AssemblyInput, ComponentRecord, Face, IntersectionReport, Status, Verdict,
    SCHEMA_VERSION,
};
pub use contour::{contour, contour_crossings, longest_shared_run, Segment, Side};
pub use genericity::{genericity_screen, interior_fraction, is_thin, MAX_SHARED_RUN, THIN_FRACTION};
pub use order_polytope::{order_polytope, OrderPolytope};
pub use pipeline::{analyze_pair, PairAnalysis, PairConfig, FATTEN_CELLS};
pub use raster_ops::{intersect_rasters, ComponentCells, IntersectionGrid};
pub use vertices::{
    extract_vertices, merge_points, ExtractOptions, IntersectionVertex, OrderMatrix, RejectedVertex, VertexExtraction,
};
