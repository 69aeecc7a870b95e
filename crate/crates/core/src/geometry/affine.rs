use super::predicates::{orient, Orientation};
use super::Point;
use crate::error::GeometryError;

/// Affine map `x ↦ M x + t` with an invertible linear part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap {
    /// Row-major linear part.
    m: [[f64; 2]; 2],
    t: Point,
}

impl AffineMap {
    pub fn new(m: [[f64; 2]; 2], t: Point) -> Result<Self, GeometryError> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(GeometryError::SingularMap);
        }
        Ok(Self { m, t })
    }

    pub fn identity() -> Self {
        Self {
            m: [[1.0, 0.0], [0.0, 1.0]],
            t: Point::ORIGIN,
        }
    }

    /// Uniform scaling by `factor` about `center`.
    pub fn scaling_about(center: Point, factor: f64) -> Result<Self, GeometryError> {
        Self::new(
            [[factor, 0.0], [0.0, factor]],
            center - center * factor,
        )
    }

    #[inline]
    pub fn apply(&self, p: Point) -> Point {
        Point::new(
            self.m[0][0] * p.x + self.m[0][1] * p.y + self.t.x,
            self.m[1][0] * p.x + self.m[1][1] * p.y + self.t.y,
        )
    }

    pub fn linear(&self) -> [[f64; 2]; 2] {
        self.m
    }

    pub fn translation(&self) -> Point {
        self.t
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn inverse(&self) -> AffineMap {
        let d = self.det();
        let inv = [
            [self.m[1][1] / d, -self.m[0][1] / d],
            [-self.m[1][0] / d, self.m[0][0] / d],
        ];
        let t = Point::new(
            -(inv[0][0] * self.t.x + inv[0][1] * self.t.y),
            -(inv[1][0] * self.t.x + inv[1][1] * self.t.y),
        );
        AffineMap { m: inv, t }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let a = self.m;
        let b = other.m;
        let m = [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ];
        AffineMap {
            m,
            t: self.apply(other.t),
        }
    }
}

/// The unique affine map sending `a ↦ (0,1)`, `apex ↦ (0,0)`, `b ↦ (1,0)`.
///
/// Its determinant has absolute value `1 / (2 area(a, apex, b))`.
pub fn map_triangle_to_canonical(
    a: Point,
    apex: Point,
    b: Point,
) -> Result<AffineMap, GeometryError> {
    if orient(a, apex, b) == Orientation::Collinear {
        return Err(GeometryError::DegenerateTriangle);
    }
    // M [w u] = I with u = a - apex, w = b - apex.
    let u = a - apex;
    let w = b - apex;
    let d = w.x * u.y - u.x * w.y;
    let m = [[u.y / d, -u.x / d], [-w.y / d, w.x / d]];
    let t = Point::new(
        -(m[0][0] * apex.x + m[0][1] * apex.y),
        -(m[1][0] * apex.x + m[1][1] * apex.y),
    );
    AffineMap::new(m, t)
}
