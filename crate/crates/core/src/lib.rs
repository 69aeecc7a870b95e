//! Random polygons in convex polygonal containers.

pub mod chain;
pub mod cli;
pub mod corners;
pub mod error;
pub mod experiments;
pub mod floating_body;
pub mod geometry;
pub mod sampling;
pub mod stats;

pub use error::{Error, GeometryError, Result};
