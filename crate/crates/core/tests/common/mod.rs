//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's geometry code.
#![allow(dead_code)]

use hulllab::geometry::{Point, Polygon};
use rand::Rng;

pub const EULER_GAMMA: f64 = 0.5772156649015329;

pub fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Extreme points of points in general position: `(a, b)` is a hull edge
/// when every other point lies strictly left of `a → b`. Sorted by `(x, y)`.
pub fn hull_oracle(points: &[Point]) -> Vec<Point> {
    let mut out = Vec::new();
    for (i, &a) in points.iter().enumerate() {
        for (j, &b) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let edge = points
                .iter()
                .enumerate()
                .all(|(k, &c)| k == i || k == j || cross(a, b, c) > 0.0);
            if edge {
                out.push(a);
                out.push(b);
            }
        }
    }
    sort_points(&mut out);
    out.dedup();
    out
}

pub fn sort_points(v: &mut [Point]) {
    v.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
}

/// Area of `{x ∈ ring : u·(x − z) ≥ 0}` with `u = (cos θ, sin θ)`, by
/// Sutherland–Hodgman clipping and the shoelace formula.
pub fn cap_area_oracle(ring: &[Point], z: Point, theta: f64) -> f64 {
    let (ux, uy) = (theta.cos(), theta.sin());
    let side = |p: Point| ux * (p.x - z.x) + uy * (p.y - z.y);
    let mut clipped = Vec::with_capacity(ring.len() + 2);
    for i in 0..ring.len() {
        let a = ring[i];
        let b = ring[(i + 1) % ring.len()];
        let (sa, sb) = (side(a), side(b));
        if sa >= 0.0 {
            clipped.push(a);
        }
        if (sa >= 0.0) != (sb >= 0.0) {
            let t = sa / (sa - sb);
            clipped.push(Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
        }
    }
    shoelace(&clipped)
}

pub fn shoelace(ring: &[Point]) -> f64 {
    let n = ring.len();
    if n < 3 {
        return 0.0;
    }
    let s: f64 = (0..n)
        .map(|i| {
            let (a, b) = (ring[i], ring[(i + 1) % n]);
            a.x * b.y - a.y * b.x
        })
        .sum();
    0.5 * s.abs()
}

/// Minimum cap area over `dirs` equally spaced directions.
pub fn brute_v(p: &Polygon, z: Point, dirs: usize) -> f64 {
    (0..dirs)
        .map(|k| cap_area_oracle(p.vertices(), z, std::f64::consts::TAU * k as f64 / dirs as f64))
        .fold(f64::INFINITY, f64::min)
}

/// Convex polygon with 3 to 9 vertices on an ellipse, angular gaps ≥ 0.1.
pub fn random_polygon<R: Rng>(rng: &mut R) -> Polygon {
    loop {
        let k = rng.random_range(3..10);
        let mut angles: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let gaps_ok = (0..k).all(|i| {
            let next = if i + 1 < k { angles[i + 1] } else { angles[0] + std::f64::consts::TAU };
            next - angles[i] >= 0.1
        });
        if !gaps_ok {
            continue;
        }
        let (a, b) = (rng.random_range(0.5..2.0), rng.random_range(0.5..2.0));
        let c = Point::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let verts: Vec<Point> = angles
            .iter()
            .map(|t| Point::new(c.x + a * t.cos(), c.y + b * t.sin()))
            .collect();
        let spans_center = shoelace(&verts) > 0.3 * std::f64::consts::PI * a * b;
        if spans_center {
            if let Ok(p) = Polygon::new(verts) {
                return p;
            }
        }
    }
}

pub fn inside_oracle(ring: &[Point], q: Point) -> bool {
    (0..ring.len()).all(|i| cross(ring[i], ring[(i + 1) % ring.len()], q) >= 0.0)
}

/// Uniform point by rejection from the bounding box.
pub fn uniform_oracle<R: Rng>(p: &Polygon, rng: &mut R) -> Point {
    let v = p.vertices();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for q in v {
        x0 = x0.min(q.x);
        x1 = x1.max(q.x);
        y0 = y0.min(q.y);
        y1 = y1.max(q.y);
    }
    loop {
        let q = Point::new(rng.random_range(x0..x1), rng.random_range(y0..y1));
        if inside_oracle(v, q) {
            return q;
        }
    }
}

/// Uniform point in the triangle `(0,0), (1,0), (0,1)` by folding the square.
pub fn canonical_triangle_point<R: Rng>(rng: &mut R) -> Point {
    let (u, v): (f64, f64) = (rng.random(), rng.random());
    if u + v > 1.0 {
        Point::new(1.0 - u, 1.0 - v)
    } else {
        Point::new(u, v)
    }
}

pub fn chain_mean_oracle(k: u64) -> f64 {
    let h: f64 = (1..=k).map(|i| 1.0 / i as f64).sum();
    (2.0 * h + 7.0) / 3.0
}

pub fn chain_var_oracle(k: u64) -> f64 {
    let h: f64 = (1..=k).map(|i| 1.0 / i as f64).sum();
    let h2: f64 = (1..=k).map(|i| 1.0 / (i as f64 * i as f64)).sum();
    (10.0 * h + 12.0 * h2 - 28.0) / 27.0 + 4.0 / (9.0 * (k as f64 + 1.0))
}

/// Leading-order vertex-number mean and variance for an `ell`-gon with
/// `Σ log(F_i/A) = log_ratio_sum`.
pub fn moment_expansion(ell: f64, log_ratio_sum: f64, n: f64) -> (f64, f64) {
    let pi2 = std::f64::consts::PI.powi(2);
    let mean = 2.0 * ell / 3.0 * n.ln() + 2.0 / 3.0 * log_ratio_sum + 2.0 * EULER_GAMMA * ell / 3.0;
    let var = 10.0 * ell / 27.0 * n.ln() + 10.0 / 27.0 * log_ratio_sum + (10.0 * EULER_GAMMA - 2.0 * pi2) * ell / 27.0;
    (mean, var)
}

/// Sample mean and the standard error of the sample variance.
pub fn mean_var(xs: &[f64]) -> (f64, f64, f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    let var = m2 * n / (n - 1.0);
    ((mean), var, (var / n).sqrt(), ((m4 - m2 * m2) / n).max(0.0).sqrt())
}
