//! Planar convex hulls (Andrew's monotone chain).
//!
//! Collinear boundary points are dropped, so the hull vertices are exactly
//! the strict extreme points of the input and `f0` is their number.

use super::predicates::{orient, Orientation};
use super::{Point, Polygon};

/// Result of a hull computation.
#[derive(Clone, Debug, PartialEq)]
pub enum Hull {
    /// Fewer than three non-collinear points; holds the 0, 1 or 2 extreme points.
    Degenerate(Vec<Point>),
    Polygon(Polygon),
}

impl Hull {
    /// Number of hull vertices.
    pub fn f0(&self) -> usize {
        match self {
            Hull::Degenerate(v) => v.len(),
            Hull::Polygon(p) => p.len(),
        }
    }

    pub fn vertices(&self) -> &[Point] {
        match self {
            Hull::Degenerate(v) => v,
            Hull::Polygon(p) => p.vertices(),
        }
    }

    pub fn as_polygon(&self) -> Option<&Polygon> {
        match self {
            Hull::Polygon(p) => Some(p),
            Hull::Degenerate(_) => None,
        }
    }

    /// Area of the hull, zero when degenerate.
    pub fn area(&self) -> f64 {
        self.as_polygon().map_or(0.0, Polygon::area)
    }
}

pub fn convex_hull(points: &[Point]) -> Hull {
    let mut scratch = HullScratch::default();
    let verts = scratch.vertices(points).to_vec();
    if verts.len() >= 3 {
        Hull::Polygon(Polygon::from_hull_unchecked(verts))
    } else {
        Hull::Degenerate(verts)
    }
}

/// Below this size the extreme-point prefilter does not pay off.
const PREFILTER_MIN: usize = 64;

/// Reusable buffers for repeated hull computations in a hot loop.
#[derive(Clone, Default, Debug)]
pub struct HullScratch {
    work: Vec<Point>,
    out: Vec<Point>,
}

impl HullScratch {
    /// Counterclockwise hull vertices, starting at the lexicographically
    /// smallest point. Fewer than three entries means a degenerate hull.
    pub fn vertices(&mut self, points: &[Point]) -> &[Point] {
        self.work.clear();
        if points.len() >= PREFILTER_MIN {
            prefilter(points, &mut self.work);
        } else {
            self.work.extend_from_slice(points);
        }
        monotone_chain(&mut self.work, &mut self.out);
        &self.out
    }

    pub fn f0(&mut self, points: &[Point]) -> usize {
        self.vertices(points).len()
    }
}

fn lex(a: &Point, b: &Point) -> std::cmp::Ordering {
    a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y))
}

fn monotone_chain(pts: &mut Vec<Point>, out: &mut Vec<Point>) {
    out.clear();
    pts.sort_unstable_by(lex);
    pts.dedup();
    let n = pts.len();
    if n <= 2 {
        out.extend_from_slice(pts);
        return;
    }
    for &p in pts.iter() {
        while out.len() >= 2
            && orient(out[out.len() - 2], out[out.len() - 1], p) != Orientation::CounterClockwise
        {
            out.pop();
        }
        out.push(p);
    }
    let lower_len = out.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while out.len() >= lower_len
            && orient(out[out.len() - 2], out[out.len() - 1], p) != Orientation::CounterClockwise
        {
            out.pop();
        }
        out.push(p);
    }
    // The last point pushed is the first point again.
    out.pop();
}

/// Akl–Toussaint: drop points strictly inside the polygon spanned by the
/// extreme points in eight directions. Such points are interior to the hull.
fn prefilter(points: &[Point], keep: &mut Vec<Point>) {
    let keys: [fn(&Point) -> f64; 8] = [
        |p| -p.x,
        |p| -(p.x + p.y),
        |p| -p.y,
        |p| p.x - p.y,
        |p| p.x,
        |p| p.x + p.y,
        |p| p.y,
        |p| p.y - p.x,
    ];
    let mut best = [points[0]; 8];
    let mut best_val = [f64::NEG_INFINITY; 8];
    for p in points {
        for k in 0..8 {
            let v = keys[k](p);
            if v > best_val[k] {
                best_val[k] = v;
                best[k] = *p;
            }
        }
    }
    let mut ring = Vec::with_capacity(8);
    let mut cand = best.to_vec();
    monotone_chain(&mut cand, &mut ring);
    if ring.len() < 3 {
        keep.extend_from_slice(points);
        return;
    }
    let m = ring.len();
    keep.extend(points.iter().copied().filter(|&p| {
        !(0..m).all(|j| orient(ring[j], ring[(j + 1) % m], p) == Orientation::CounterClockwise)
    }));
}
