//! Planar geometry kernel: exact orientation, hulls, polygons, half-planes
//! and affine maps.

mod affine;
mod halfplane;
mod hull;
mod point;
mod polygon;
mod predicates;

pub use affine::{map_triangle_to_canonical, AffineMap};
pub use halfplane::{cap_area, HalfPlane};
pub use hull::{convex_hull, Hull, HullScratch};
pub use point::{signed_ring_area, triangle_area, Point};
pub use polygon::{normalize_to_unit_area, polygon_area, polygon_metrics, Polygon, PolygonMetrics};
pub use predicates::{orient, Orientation};


#[cfg(test)]
pub(crate) use hull::oracle::extreme_points as extreme_points_oracle;
