use std::f64::consts::PI;

use serde::Serialize;

use super::point::{signed_ring_area, triangle_area};
use super::predicates::{orient, Orientation};
use super::Point;
use crate::error::GeometryError;

/// A strictly convex polygon with counterclockwise vertices.
///
/// Edge `i` is `e_i = [v_{i-1}, v_i]`, indices taken modulo the vertex
/// count, so edge 0 joins the last vertex to the first.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polygon {
    vertices: Vec<Point>,
}

/// Per-polygon quantities used by the moment expansions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolygonMetrics {
    /// Vertex count.
    pub ell: usize,
    /// `edge_lengths[i]` is the length of `e_i = [v_{i-1}, v_i]`.
    pub edge_lengths: Vec<f64>,
    /// Interior angle at `v_i`, radians.
    pub angles: Vec<f64>,
    /// `corner_areas[i]` is the area of `[v_{i-1}, v_i, v_{i+1}]`.
    pub corner_areas: Vec<f64>,
    pub total_area: f64,
}

impl Polygon {
    /// Validates a counterclockwise, strictly convex vertex list.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        validate(&vertices, Orientation::CounterClockwise)?;
        Ok(Self { vertices })
    }

    /// Accepts either orientation and stores the vertices counterclockwise.
    /// Error indices refer to the input order.
    pub fn from_vertices(mut vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::TooFewVertices(vertices.len()));
        }
        check_finite_and_distinct(&vertices)?;
        let expected = if signed_ring_area(&vertices) < 0.0 {
            Orientation::Clockwise
        } else {
            Orientation::CounterClockwise
        };
        validate(&vertices, expected)?;
        if expected == Orientation::Clockwise {
            vertices.reverse();
        }
        Ok(Self { vertices })
    }

    /// Hull output is strictly convex by construction.
    pub(crate) fn from_hull_unchecked(vertices: Vec<Point>) -> Self {
        debug_assert!(vertices.len() >= 3);
        Self { vertices }
    }

    /// Regular `k`-gon inscribed in the unit circle, first vertex at angle 0.
    pub fn regular(k: usize) -> Result<Self, GeometryError> {
        if k < 3 {
            return Err(GeometryError::TooFewVertices(k));
        }
        let vertices = (0..k)
            .map(|j| Point::from_angle(2.0 * PI * j as f64 / k as f64))
            .collect();
        Polygon::new(vertices)
    }

    /// The unit square `[0, 1]²`.
    pub fn unit_square() -> Self {
        Self {
            vertices: vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(1.0, 1.0),
                Point::new(0.0, 1.0),
            ],
        }
    }

    #[inline]
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex with cyclic indexing.
    #[inline]
    pub fn vertex(&self, i: isize) -> Point {
        let l = self.vertices.len() as isize;
        self.vertices[i.rem_euclid(l) as usize]
    }

    /// Endpoints `(v_{i-1}, v_i)` of edge `e_i`.
    #[inline]
    pub fn edge(&self, i: usize) -> (Point, Point) {
        (self.vertex(i as isize - 1), self.vertex(i as isize))
    }

    pub fn area(&self) -> f64 {
        signed_ring_area(&self.vertices)
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point {
        let o = self.vertices[0];
        let mut acc = Point::ORIGIN;
        let mut twice_area = 0.0;
        for w in self.vertices[1..].windows(2) {
            let (a, b) = (w[0] - o, w[1] - o);
            let cr = a.cross(b);
            twice_area += cr;
            acc = acc + (a + b) * cr;
        }
        o + acc * (1.0 / (3.0 * twice_area))
    }

    /// Boundary-inclusive membership, exact.
    pub fn contains(&self, p: Point) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            orient(self.vertices[i], self.vertices[(i + 1) % n], p) != Orientation::Clockwise
        })
    }

    /// Strict interior membership, exact.
    pub fn contains_strictly(&self, p: Point) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            orient(self.vertices[i], self.vertices[(i + 1) % n], p)
                == Orientation::CounterClockwise
        })
    }

    pub fn metrics(&self) -> PolygonMetrics {
        let ell = self.vertices.len();
        let mut edge_lengths = Vec::with_capacity(ell);
        let mut angles = Vec::with_capacity(ell);
        let mut corner_areas = Vec::with_capacity(ell);
        for i in 0..ell as isize {
            let prev = self.vertex(i - 1);
            let cur = self.vertex(i);
            let next = self.vertex(i + 1);
            edge_lengths.push(cur.distance(prev));
            let (a, b) = (prev - cur, next - cur);
            angles.push(a.cross(b).abs().atan2(a.dot(b)));
            corner_areas.push(triangle_area(prev, cur, next));
        }
        PolygonMetrics {
            ell,
            edge_lengths,
            angles,
            corner_areas,
            total_area: self.area(),
        }
    }

    /// Applies `p ↦ center + factor (p - center)` to every vertex.
    pub fn scaled_about(&self, center: Point, factor: f64) -> Polygon {
        debug_assert!(factor > 0.0);
        Polygon {
            vertices: self
                .vertices
                .iter()
                .map(|&v| center + (v - center) * factor)
                .collect(),
        }
    }

    pub fn translated(&self, offset: Point) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|&v| v + offset).collect(),
        }
    }

    /// Similar polygon of area one, scaled about the centroid.
    pub fn normalized_to_unit_area(&self) -> Polygon {
        let area = self.area();
        if area == 1.0 {
            return self.clone();
        }
        self.scaled_about(self.centroid(), 1.0 / area.sqrt())
    }

    /// Cells `(v_0, v_j, v_{j+1})`, `j = 1..ℓ-1`, of the fan triangulation
    /// from vertex 0.
    pub fn fan_cells(&self) -> impl Iterator<Item = [Point; 3]> + '_ {
        let o = self.vertices[0];
        self.vertices[1..].windows(2).map(move |w| [o, w[0], w[1]])
    }

    /// Signed distance of `p` from the supporting line of `e_i`, positive
    /// towards the interior.
    #[inline]
    pub fn inward_offset(&self, i: usize, p: Point) -> f64 {
        let (a, b) = self.edge(i);
        let d = b - a;
        d.cross(p - a) / d.norm()
    }
}

pub fn polygon_area(p: &Polygon) -> f64 {
    p.area()
}

pub fn polygon_metrics(p: &Polygon) -> PolygonMetrics {
    p.metrics()
}

pub fn normalize_to_unit_area(p: &Polygon) -> Polygon {
    p.normalized_to_unit_area()
}

fn check_finite_and_distinct(vertices: &[Point]) -> Result<(), GeometryError> {
    let n = vertices.len();
    for (index, v) in vertices.iter().enumerate() {
        if !v.is_finite() {
            return Err(GeometryError::NonFinite { index });
        }
    }
    for i in 0..n {
        let j = (i + 1) % n;
        if vertices[i] == vertices[j] {
            return Err(GeometryError::Repeated { index: j });
        }
    }
    Ok(())
}

fn validate(vertices: &[Point], expected: Orientation) -> Result<(), GeometryError> {
    let n = vertices.len();
    if n < 3 {
        return Err(GeometryError::TooFewVertices(n));
    }
    check_finite_and_distinct(vertices)?;
    for i in 0..n {
        let prev = vertices[(i + n - 1) % n];
        let next = vertices[(i + 1) % n];
        match orient(prev, vertices[i], next) {
            Orientation::Collinear => return Err(GeometryError::Collinear { index: i }),
            o if o != expected => return Err(GeometryError::NotConvex { index: i }),
            _ => {}
        }
    }
    // All turns agree in sign; a star polygon still winds more than once.
    let mut turning = 0.0;
    for i in 0..n {
        let a = vertices[i] - vertices[(i + n - 1) % n];
        let b = vertices[(i + 1) % n] - vertices[i];
        turning += a.cross(b).atan2(a.dot(b));
    }
    let turns = (turning.abs() / (2.0 * PI)).round() as i64;
    if turns != 1 {
        return Err(GeometryError::NotSimple { turns });
    }
    Ok(())
}
