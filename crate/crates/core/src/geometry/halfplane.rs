use super::point::signed_ring_area;
use super::{Point, Polygon};
use crate::error::GeometryError;

/// Closed half-plane `L⁻ = {x : u·x ≤ t}` with unit normal `u`.
///
/// Its boundary is the line `L = {x : u·x = t}`; the complementary side is
/// `L⁺ = {x : u·x ≥ t}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlane {
    normal: Point,
    offset: f64,
}

impl HalfPlane {
    /// Normalizes `normal` (and scales `offset` with it).
    pub fn new(normal: Point, offset: f64) -> Result<Self, GeometryError> {
        let len = normal.norm();
        if len == 0.0 || !len.is_finite() || !offset.is_finite() {
            return Err(GeometryError::ZeroNormal);
        }
        Ok(Self {
            normal: normal * (1.0 / len),
            offset: offset / len,
        })
    }

    /// Half-plane with unit normal at angle `theta` whose boundary passes through `p`.
    pub fn through(p: Point, theta: f64) -> Self {
        let normal = Point::from_angle(theta);
        Self {
            normal,
            offset: normal.dot(p),
        }
    }

    pub fn normal(&self) -> Point {
        self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// `u·p - t`; non-positive inside `L⁻`.
    #[inline]
    pub fn eval(&self, p: Point) -> f64 {
        self.normal.dot(p) - self.offset
    }

    #[inline]
    pub fn contains(&self, p: Point) -> bool {
        self.eval(p) <= 0.0
    }

    /// The opposite side `L⁺`, as a half-plane.
    pub fn flipped(&self) -> Self {
        Self {
            normal: -self.normal,
            offset: -self.offset,
        }
    }

    /// Same normal, boundary shifted by `delta` along the normal.
    pub fn shifted(&self, delta: f64) -> Self {
        Self {
            normal: self.normal,
            offset: self.offset + delta,
        }
    }

    /// Sutherland–Hodgman clip of a convex ring against `L⁻`.
    pub fn clip(&self, ring: &[Point], out: &mut Vec<Point>) {
        out.clear();
        let n = ring.len();
        for i in 0..n {
            let a = ring[i];
            let b = ring[(i + 1) % n];
            let fa = self.eval(a);
            let fb = self.eval(b);
            if fa <= 0.0 {
                out.push(a);
            }
            if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
                let t = fa / (fa - fb);
                out.push(a.lerp(b, t));
            }
        }
    }
}

/// `area(P ∩ L⁻)`.
pub fn cap_area(p: &Polygon, h: &HalfPlane) -> f64 {
    let mut buf = Vec::with_capacity(p.len() + 2);
    h.clip(p.vertices(), &mut buf);
    signed_ring_area(&buf).clamp(0.0, p.area())
}
