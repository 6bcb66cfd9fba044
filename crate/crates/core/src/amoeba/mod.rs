//! Amoeba numerics: membership rasters, the order map, Ronkin function and
//! complement components.

pub mod label;
pub mod order;
pub mod raster;
pub mod ronkin;
pub mod window;

pub use label::{connected_components, distance_to, label_components, order_constancy, spread_cells, OrderConstancy};
pub use order::{order_at, OrderVector, DEFAULT_TRIALS};
pub use raster::{raster_amoeba, raster_amoeba_with, AmoebaRaster, ComplementComponent, RasterOptions};
pub use ronkin::{ronkin, ronkin_coefficient, ronkin_with, RonkinCoefficient, RonkinEstimate};
pub use window::Window;
