//! Amoebas of bivariate Laurent polynomials, their spines and tropical data,
//! and the combinatorics of intersections of two amoebas.

pub mod amoeba;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod intersection;
pub mod laurent;
pub mod roots;
pub mod scenario;
pub mod spine;
pub mod svg;
pub mod tropical;

pub use error::{Error, Result};
pub use exec::Exec;
pub use laurent::{Axis, LaurentPolynomial};
