//! Cap-area function, floating bodies, wet parts and the containment events
//! for random polygons.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::geometry::{orient, HalfPlane, Orientation, Point, Polygon};
use crate::sampling::{CellSampler, RandomStream};

pub use crate::geometry::cap_area;

/// Constants of the floating-body events: threshold `δ = b0 log(n)/n` and
/// wet-point budget `c0 (log n)²`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct EventParams {
    pub b0: f64,
    pub c0: f64,
}

impl Default for EventParams {
    fn default() -> Self {
        Self { b0: 1.0, c0: 4.0 }
    }
}

impl EventParams {
    pub fn new(b0: f64, c0: f64) -> Result<Self> {
        if !(b0 > 0.0 && b0.is_finite() && c0 > 0.0 && c0.is_finite()) {
            return Err(invalid(format!("b0 and c0 must be positive, got {b0}, {c0}")));
        }
        Ok(Self { b0, c0 })
    }

    pub fn delta(&self, n: f64) -> f64 {
        self.b0 * n.ln() / n
    }

    pub fn wet_budget(&self, n: f64) -> f64 {
        self.c0 * n.ln().powi(2)
    }
}

const SCAN_DIRECTIONS: usize = 720;
const GOLDEN_BRACKET: f64 = 1e-9;

fn check_inside(p: &Polygon, z: Point) -> Result<()> {
    if !z.is_finite() || !p.contains(z) {
        return Err(Error::Geometry(crate::error::GeometryError::OutsideContainer {
            x: z.x,
            y: z.y,
        }));
    }
    Ok(())
}

/// `v(z)`: smallest area `P` loses to a half-plane containing `z`.
///
/// Coarse scan over 720 equally spaced normal directions plus the directions
/// of the lines through `z` and each vertex, then golden-section polish on
/// every local basin of the scan.
pub fn v_value(p: &Polygon, z: Point) -> Result<f64> {
    check_inside(p, z)?;
    let cap = |theta: f64| cap_area(p, &HalfPlane::through(z, theta));

    let mut thetas: Vec<f64> = (0..SCAN_DIRECTIONS)
        .map(|k| 2.0 * PI * k as f64 / SCAN_DIRECTIONS as f64)
        .collect();
    for &w in p.vertices() {
        let d = w - z;
        if d.norm() == 0.0 {
            return Ok(0.0);
        }
        let t = d.y.atan2(d.x) + 0.5 * PI;
        thetas.push(t.rem_euclid(2.0 * PI));
        thetas.push((t + PI).rem_euclid(2.0 * PI));
    }
    thetas.sort_by(f64::total_cmp);
    let values: Vec<f64> = thetas.iter().map(|&t| cap(t)).collect();
    let m = thetas.len();
    let mut best = values.iter().copied().fold(f64::INFINITY, f64::min);
    for k in 0..m {
        let (prev, next) = ((k + m - 1) % m, (k + 1) % m);
        if !(values[k] < values[prev] && values[k] <= values[next]) {
            continue;
        }
        let mut lo = thetas[prev];
        let mut hi = thetas[next];
        if prev > k {
            lo -= 2.0 * PI;
        }
        if next < k {
            hi += 2.0 * PI;
        }
        best = best.min(golden_min(&cap, lo, hi));
    }
    Ok(best.clamp(0.0, 0.5 * p.area()))
}

fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = fc.min(fd);
    while b - a > GOLDEN_BRACKET {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
        best = best.min(fc).min(fd);
    }
    best
}

/// `v(z)` by enumerating critical chords.
///
/// Rotating a line about an interior `z`, the cap area changes at rate
/// `(r₁² − r₂²)/2` where `r₁, r₂` are the distances from `z` to the two chord
/// ends, so every local minimum is a chord bisected by `z`. Such chords join
/// an edge to the reflection through `z` of another edge.
pub fn v_value_exact(p: &Polygon, z: Point) -> Result<f64> {
    check_inside(p, z)?;
    Ok(v_unchecked(p, z))
}

pub(crate) fn v_unchecked(p: &Polygon, z: Point) -> f64 {
    let area = p.area();
    let verts = p.vertices();
    let k = verts.len();
    let mut buf = Vec::with_capacity(k + 2);
    let mut best = 0.5 * area;
    let mut consider = |normal: Point, buf: &mut Vec<Point>| {
        let len = normal.norm();
        if len == 0.0 || !len.is_finite() {
            return;
        }
        let u = normal * (1.0 / len);
        let h = HalfPlane::new(u, u.dot(z)).expect("unit normal");
        h.clip(verts, buf);
        let a = crate::geometry::signed_ring_area(buf).clamp(0.0, area);
        best = best.min(a).min(area - a);
    };
    for &w in verts {
        let d = w - z;
        if d.norm() == 0.0 {
            return 0.0;
        }
        consider(d.perp(), &mut buf);
    }
    const SLACK: f64 = 1e-12;
    for i in 0..k {
        let a0 = verts[i];
        let da = verts[(i + 1) % k] - a0;
        for j in (i + 1)..k {
            let b0 = verts[j];
            let db = verts[(j + 1) % k] - b0;
            // X = a0 + s da on edge i, Y = 2z - X on edge j.
            let den = db.cross(da);
            if den == 0.0 {
                continue;
            }
            let s = db.cross(z * 2.0 - a0 - b0) / den;
            if !(-SLACK..=1.0 + SLACK).contains(&s) {
                continue;
            }
            let x = a0 + da * s;
            let y = z * 2.0 - x;
            let t = (y - b0).dot(db) / db.dot(db);
            if !(-SLACK..=1.0 + SLACK).contains(&t) {
                continue;
            }
            consider((y - x).perp(), &mut buf);
        }
    }
    best.max(0.0)
}

/// Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

/// `area{z ∈ P : v(z) < δ}` from `m` uniform evaluation points.
pub fn wet_part_area(p: &Polygon, delta: f64, stream: RandomStream, m: u64) -> Result<Estimate> {
    Ok(wet_part_profile(p, &[delta], stream, m)?[0])
}

/// Wet-part areas for several thresholds from one shared set of evaluation
/// points.
pub fn wet_part_profile(
    p: &Polygon,
    deltas: &[f64],
    stream: RandomStream,
    m: u64,
) -> Result<Vec<Estimate>> {
    if m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    if let Some(&d) = deltas.iter().find(|d| !(**d > 0.0 && d.is_finite())) {
        return Err(invalid(format!("delta must be positive, got {d}")));
    }
    let area = p.area();
    let half = 0.5 * area;
    let active: Vec<f64> = deltas.iter().copied().filter(|&d| d < half).collect();
    let mut counts = vec![0u64; active.len()];
    if let Some(&dmax) = active.iter().max_by(|a, b| a.total_cmp(b)) {
        let body = FloatingBody::new(p, dmax);
        let sampler = CellSampler::fan(p);
        let mut rng = stream.rng();
        for _ in 0..m {
            let z = sampler.sample(&mut rng);
            if body.certainly_dry(z) {
                continue;
            }
            let v = v_unchecked(p, z);
            for (c, &d) in counts.iter_mut().zip(&active) {
                if v < d {
                    *c += 1;
                }
            }
        }
    }
    let mut it = counts.into_iter();
    Ok(deltas
        .iter()
        .map(|&d| {
            if d >= half {
                return Estimate {
                    value: area,
                    stderr: 0.0,
                };
            }
            let frac = it.next().unwrap() as f64 / m as f64;
            Estimate {
                value: area * frac,
                stderr: area * (frac * (1.0 - frac) / m as f64).sqrt(),
            }
        })
        .collect())
}

/// Number of rays used to probe a floating body.
pub const PROBE_RAYS: usize = 256;
const PROBE_BISECTIONS: usize = 50;

/// Discrete description of `P(v ≥ δ)`: the centroid and, on each of 256
/// rays from it, the outermost point found by bisection with `v ≥ δ`.
#[derive(Clone, Debug)]
pub struct FloatingBody {
    pub delta: f64,
    pub centroid: Point,
    /// Empty when `v(centroid) < δ`.
    pub probes: Vec<Point>,
}

impl FloatingBody {
    pub fn new(p: &Polygon, delta: f64) -> Self {
        let c = p.centroid();
        if v_unchecked(p, c) < delta {
            return Self {
                delta,
                centroid: c,
                probes: Vec::new(),
            };
        }
        let probes = (0..PROBE_RAYS)
            .map(|k| {
                let dir = Point::from_angle(2.0 * PI * k as f64 / PROBE_RAYS as f64);
                let reach = ray_exit(p, c, dir);
                let (mut lo, mut hi) = (0.0, reach);
                for _ in 0..PROBE_BISECTIONS {
                    let mid = 0.5 * (lo + hi);
                    if v_unchecked(p, c + dir * mid) >= delta {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                c + dir * lo
            })
            .collect();
        Self {
            delta,
            centroid: c,
            probes,
        }
    }

    /// `true` when even the centroid has `v < δ`, so the body is empty up to
    /// the resolution of the probe construction.
    pub fn is_degenerate(&self) -> bool {
        self.probes.is_empty()
    }

    /// All probe points, centroid first.
    pub fn probe_points(&self) -> impl Iterator<Item = Point> + '_ {
        std::iter::once(self.centroid).chain(self.probes.iter().copied())
    }

    /// Sufficient test for `v(z) ≥ δ`: `z` strictly inside one of the fan
    /// triangles spanned by the centroid and consecutive probes. Those
    /// triangles lie in the floating body because it is convex.
    pub fn certainly_dry(&self, z: Point) -> bool {
        if self.probes.is_empty() {
            return false;
        }
        let d = z - self.centroid;
        let angle = d.y.atan2(d.x).rem_euclid(2.0 * PI);
        let k = ((angle / (2.0 * PI) * PROBE_RAYS as f64) as usize).min(PROBE_RAYS - 1);
        let a = self.probes[k];
        let b = self.probes[(k + 1) % PROBE_RAYS];
        let ccw = Orientation::CounterClockwise;
        orient(self.centroid, a, z) == ccw && orient(a, b, z) == ccw && orient(b, self.centroid, z) == ccw
    }
}

/// Distance from interior `c` along unit `dir` to the boundary of `p`.
fn ray_exit(p: &Polygon, c: Point, dir: Point) -> f64 {
    let verts = p.vertices();
    let k = verts.len();
    let mut best = f64::INFINITY;
    for i in 0..k {
        let a = verts[i];
        let e = verts[(i + 1) % k] - a;
        let den = dir.cross(e);
        if den == 0.0 {
            continue;
        }
        let t = (a - c).cross(e) / den;
        if t > 0.0 {
            best = best.min(t);
        }
    }
    best
}

/// Outcome of the floating-body containment checks on one sample.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct FloatingEvents {
    /// `P(v ≥ δ)` lies inside the hull of the sample.
    pub a: bool,
    /// At most `c0 (log n)²` sample points have `v < δ`.
    pub b: bool,
    pub wet_points: u64,
    pub delta: f64,
    /// `δ` exceeds `v` at the centroid; `a` then holds trivially.
    pub degenerate: bool,
}

/// Reusable checker for many samples of one container and intensity.
#[derive(Clone, Debug)]
pub struct EventChecker {
    polygon: Polygon,
    body: FloatingBody,
    budget: f64,
}

impl EventChecker {
    pub fn new(p: &Polygon, n: f64, params: EventParams) -> Result<Self> {
        if !(n > 1.0 && n.is_finite()) {
            return Err(invalid(format!("n must exceed 1, got {n}")));
        }
        Ok(Self {
            polygon: p.clone(),
            body: FloatingBody::new(p, params.delta(n)),
            budget: params.wet_budget(n),
        })
    }

    pub fn body(&self) -> &FloatingBody {
        &self.body
    }

    /// `points` is the sample and `hull` the CCW vertex ring of its convex
    /// hull. Points that cannot hold `v < δ` may be omitted from `points`.
    pub fn check(&self, points: &[Point], hull: &[Point]) -> FloatingEvents {
        let degenerate = self.body.is_degenerate();
        let a = degenerate
            || (hull.len() >= 3 && self.body.probe_points().all(|q| in_ring(hull, q)));
        let wet_points = points
            .iter()
            .filter(|&&z| !self.body.certainly_dry(z) && v_unchecked(&self.polygon, z) < self.body.delta)
            .count() as u64;
        FloatingEvents {
            a,
            b: wet_points as f64 <= self.budget,
            wet_points,
            delta: self.body.delta,
            degenerate,
        }
    }
}

/// Boundary-inclusive membership in a CCW convex ring.
pub(crate) fn in_ring(ring: &[Point], q: Point) -> bool {
    let k = ring.len();
    (0..k).all(|i| orient(ring[i], ring[(i + 1) % k], q) != Orientation::Clockwise)
}

pub fn floating_events(
    p: &Polygon,
    sample: &[Point],
    n: f64,
    params: EventParams,
) -> Result<FloatingEvents> {
    let checker = EventChecker::new(p, n, params)?;
    let hull = crate::geometry::convex_hull(sample);
    let ring: &[Point] = match &hull {
        crate::geometry::Hull::Polygon(poly) => poly.vertices(),
        crate::geometry::Hull::Degenerate(_) => &[],
    };
    Ok(checker.check(sample, ring))
}
