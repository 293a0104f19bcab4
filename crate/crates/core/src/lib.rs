//! Pfaffian curve incidences: tracing, intersections, cuttings, incidence
//! counting, duality and bound evaluation.

pub mod chains;
pub mod curve;
pub mod cutting;
pub mod duality;
pub mod error;
pub mod generators;
pub mod geom;
pub mod harness;
pub mod incidence;
pub mod intersect;
pub mod poly;
pub mod scene;

pub use error::{Error, Result};
pub use geom::{Mat2, Point, Rect};
