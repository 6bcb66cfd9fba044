use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("evaluation point has a zero coordinate; polynomials are evaluated on the torus only")]
    OffTorus,

    #[error("fiber polynomial vanishes identically (fixed value lies on a coordinate-aligned component)")]
    DegenerateFiber,

    #[error("polynomial has negative exponents; clear denominators before realification")]
    NegativeExponent,

    #[error("a Laurent polynomial needs at least one nonzero term")]
    EmptyPolynomial,

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("polytope is not two-dimensional")]
    DegeneratePolytope,

    #[error("support of the tropical polynomial is {0}")]
    DegenerateSupport(&'static str),

    #[error("support points of a tropical polynomial must be distinct")]
    DuplicateSupport,

    #[error("non-convergent stable intersection: {0}")]
    NonConvergentStableIntersection(String),

    #[error("point on or near amoeba: {0}")]
    NearAmoeba(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("rasters do not share one window and resolution")]
    WindowMismatch,

    #[error("quadrature too coarse: Ronkin coefficient spread {0:.3e} exceeds tolerance")]
    QuadratureTooCoarse(f64),

    #[error("sample {point:?} has order {found:?}, expected {expected:?}")]
    WrongOrder {
        point: [f64; 2],
        found: [i64; 2],
        expected: [i64; 2],
    },

    #[error("complement component {0} has no resolved order")]
    UnresolvedComponent(u32),

    #[error("epsilon {0} is below the raster resolution")]
    EpsilonBelowResolution(f64),

    #[error("fan cone carries no provenance from two source fans")]
    MissingProvenance,

    #[error("vertex is not adjacent to a unique complement component: {0}")]
    GenericityViolated(String),

    #[error("vertex swallowed: no probe point outside amoeba {0}")]
    VertexSwallowed(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
