//! Orientation predicate with an exact sign.
//!
//! The fast path evaluates the determinant in floating point and accepts the
//! sign whenever it exceeds a forward error bound. Otherwise the determinant
//! is re-evaluated exactly as a floating-point expansion (error-free products
//! and sums), so the returned sign is always the sign of the real
//! determinant of the given `f64` inputs.

use super::Point;

/// Orientation of an ordered triple of points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    /// −1, 0 or +1.
    #[inline]
    pub fn sign(self) -> i32 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::CounterClockwise => 1,
        }
    }

    #[inline]
    fn from_f64(v: f64) -> Self {
        if v > 0.0 {
            Orientation::CounterClockwise
        } else if v < 0.0 {
            Orientation::Clockwise
        } else {
            Orientation::Collinear
        }
    }
}

const EPSILON: f64 = f64::EPSILON * 0.5;
const CCW_ERRBOUND_A: f64 = (3.0 + 16.0 * EPSILON) * EPSILON;

/// Sign of twice the signed area of the triangle `(a, b, c)`.
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> Orientation {
    let detleft = (a.x - c.x) * (b.y - c.y);
    let detright = (a.y - c.y) * (b.x - c.x);
    let det = detleft - detright;

    let detsum = if detleft > 0.0 {
        if detright <= 0.0 {
            return Orientation::from_f64(det);
        }
        detleft + detright
    } else if detleft < 0.0 {
        if detright >= 0.0 {
            return Orientation::from_f64(det);
        }
        -detleft - detright
    } else {
        return Orientation::from_f64(det);
    };

    if det.abs() >= CCW_ERRBOUND_A * detsum {
        return Orientation::from_f64(det);
    }
    orient_exact(a, b, c)
}

/// Exact evaluation of `ax*by - ax*cy - cx*by - ay*bx + ay*cx + cy*bx`.
#[cold]
fn orient_exact(a: Point, b: Point, c: Point) -> Orientation {
    let terms = [
        (a.x, b.y),
        (-a.x, c.y),
        (-c.x, b.y),
        (-a.y, b.x),
        (a.y, c.x),
        (c.y, b.x),
    ];
    let mut expansion = Expansion::new();
    for (u, v) in terms {
        let (hi, lo) = two_product(u, v);
        expansion.grow(lo);
        expansion.grow(hi);
    }
    Orientation::from_f64(expansion.most_significant())
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bv = s - a;
    let av = s - bv;
    (s, (a - av) + (b - bv))
}

#[inline]
fn two_product(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Nonoverlapping expansion with components in increasing magnitude.
struct Expansion {
    comps: [f64; 16],
    len: usize,
}

impl Expansion {
    fn new() -> Self {
        Self {
            comps: [0.0; 16],
            len: 0,
        }
    }

    /// Adds one double, eliminating zero components.
    fn grow(&mut self, b: f64) {
        let mut q = b;
        let mut out = [0.0; 16];
        let mut k = 0;
        for &e in &self.comps[..self.len] {
            let (sum, err) = two_sum(q, e);
            q = sum;
            if err != 0.0 {
                out[k] = err;
                k += 1;
            }
        }
        if q != 0.0 || k == 0 {
            out[k] = q;
            k += 1;
        }
        self.comps = out;
        self.len = k;
    }

    fn most_significant(&self) -> f64 {
        self.comps[..self.len]
            .iter()
            .rev()
            .copied()
            .find(|c| *c != 0.0)
            .unwrap_or(0.0)
    }
}
