//! Corner decomposition of a random polygon: per-edge extreme points `Z_i`,
//! apexes `V_i`, corner triangles `Δ_i = [Z_i, V_i, Z_{i+1}]`, the regularity
//! event `𝓔`, and simulation of the logarithmic corner moments.
//!
//! Edge `e_i` runs from `v_{i-1}` to `v_i`; corner `i` sits at `v_i`, between
//! `e_i` and `e_{i+1}`.

use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::chain::chain_count_into;
use crate::error::{invalid, Error, Result};
use crate::geometry::{
    map_triangle_to_canonical, orient, triangle_area, HullScratch, Orientation, Point, Polygon,
};
use crate::sampling::{poisson_count, CellSampler, RandomStream};
use crate::stats::{covariance, summarize};

const PARALLEL_SIN: f64 = 1e-12;
const CANONICAL_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CornerDecomposition {
    /// `Z_i`: sample point closest to the line of `e_i`.
    pub z: Vec<Point>,
    /// Index of `Z_i` in the sample.
    pub z_index: Vec<usize>,
    /// `V_i = L(Z_i) ∩ L(Z_{i+1})`.
    pub v: Vec<Point>,
    /// `[δ_{i,i}, δ_{i,i+1}] = [‖Z_i − V_i‖, ‖V_i − Z_{i+1}‖]`.
    pub delta: Vec<[f64; 2]>,
    /// `d(Z_i, e_i)`, distance to the supporting line of `e_i`.
    pub edge_dist: Vec<f64>,
    /// `Z_i ≠ Z_{i+1}`.
    pub distinct: Vec<bool>,
    pub event_e: bool,
}

impl CornerDecomposition {
    pub fn triangle(&self, i: usize) -> [Point; 3] {
        let l = self.z.len();
        [self.z[i], self.v[i], self.z[(i + 1) % l]]
    }

    pub fn triangle_area(&self, i: usize) -> f64 {
        let [a, b, c] = self.triangle(i);
        triangle_area(a, b, c)
    }

    pub fn all_distinct(&self) -> bool {
        self.distinct.iter().all(|&d| d)
    }
}

/// Builds the decomposition of `points` in `p` for intensity `n`. Ties in
/// the per-edge minimum go to the lowest index.
pub fn build_decomposition(p: &Polygon, points: &[Point], n: f64) -> Result<CornerDecomposition> {
    if points.is_empty() {
        return Err(Error::EmptySample);
    }
    let l = p.len();
    let mut z_index = vec![0usize; l];
    let mut edge_dist = vec![f64::INFINITY; l];
    for i in 0..l {
        let (a, b) = p.edge(i);
        let d = b - a;
        let len = d.norm();
        for (j, &q) in points.iter().enumerate() {
            let off = d.cross(q - a) / len;
            if off < edge_dist[i] {
                edge_dist[i] = off;
                z_index[i] = j;
            }
        }
    }
    let z: Vec<Point> = z_index.iter().map(|&j| points[j]).collect();
    let mut v = Vec::with_capacity(l);
    let mut delta = Vec::with_capacity(l);
    let mut distinct = Vec::with_capacity(l);
    let mut parallel = false;
    for i in 0..l {
        let k = (i + 1) % l;
        let (a0, a1) = p.edge(i);
        let (b0, b1) = p.edge(k);
        let (di, dk) = (a1 - a0, b1 - b0);
        let den = di.cross(dk);
        if (den / (di.norm() * dk.norm())).abs() < PARALLEL_SIN {
            parallel = true;
        }
        let s = (z[k] - z[i]).cross(dk) / den;
        let apex = z[i] + di * s;
        v.push(apex);
        delta.push([z[i].distance(apex), apex.distance(z[k])]);
        distinct.push(z_index[i] != z_index[k]);
    }
    let near = n.powf(-0.75);
    let far = n.powf(-0.25);
    let event_e = !parallel
        && distinct.iter().all(|&d| d)
        && edge_dist.iter().all(|&d| d <= near)
        && delta.iter().all(|d| d[0] >= far && d[1] >= far);
    Ok(CornerDecomposition {
        z,
        z_index,
        v,
        delta,
        edge_dist,
        distinct,
        event_e,
    })
}

/// `ℓ + Σ_i (f₀ of the chain on A_i(sample ∩ Δ_i)) − 2ℓ`, where `A_i` sends
/// `(Z_i, V_i, Z_{i+1})` to `((0,1), (0,0), (1,0))`.
pub fn decomposed_vertex_count(p: &Polygon, points: &[Point]) -> Result<usize> {
    let dec = build_decomposition(p, points, points.len().max(2) as f64)?;
    decomposed_count_from(&dec, points)
}

pub fn decomposed_count_from(dec: &CornerDecomposition, points: &[Point]) -> Result<usize> {
    let l = dec.z.len();
    if let Some(edge) = dec.distinct.iter().position(|&d| !d) {
        return Err(Error::CoincidentCorners { edge });
    }
    let mut corner_points: Vec<Vec<Point>> = vec![Vec::new(); l];
    for &q in points {
        // Regions beyond distinct chords are disjoint.
        if let Some(i) = (0..l).find(|&i| {
            orient(dec.z[i], dec.z[(i + 1) % l], q) == Orientation::Clockwise
        }) {
            corner_points[i].push(q);
        }
    }
    let mut total = l;
    let mut buf = Vec::new();
    let mut hull = HullScratch::default();
    for (i, pts) in corner_points.iter_mut().enumerate() {
        if pts.is_empty() {
            continue;
        }
        let [a, apex, b] = dec.triangle(i);
        let map = map_triangle_to_canonical(a, apex, b)?;
        for q in pts.iter_mut() {
            *q = map.apply(*q);
            assert!(
                q.x >= -CANONICAL_SLACK && q.y >= -CANONICAL_SLACK && q.x + q.y <= 1.0 + CANONICAL_SLACK,
                "corner point leaves the canonical triangle: {q:?}"
            );
        }
        total += chain_count_into(pts, &mut buf, &mut hull) - 2;
    }
    Ok(total)
}

/// Poisson process on `p` restricted to `{z : d(z, e_i) ≤ w_i for some i}`.
///
/// Configurations on disjoint regions are independent, so the restriction is
/// the full process with the points far from every edge removed.
#[derive(Clone, Debug)]
pub struct EdgeStripSampler {
    sampler: CellSampler,
    mean: f64,
}

impl EdgeStripSampler {
    pub fn new(p: &Polygon, n: f64, widths: &[f64]) -> Self {
        let full = || Self {
            sampler: CellSampler::fan(p),
            mean: n,
        };
        let l = p.len();
        // Inner polygon cut out by the shifted edge lines; corner `i` between
        // e_i and e_{i+1}.
        let mut inner = Vec::with_capacity(l);
        for i in 0..l {
            let k = (i + 1) % l;
            let (a0, a1) = p.edge(i);
            let (b0, b1) = p.edge(k);
            let (di, dk) = (a1 - a0, b1 - b0);
            let ai = a0 + di.perp() * (widths[i] / di.norm());
            let bk = b0 + dk.perp() * (widths[k] / dk.norm());
            let s = (bk - ai).cross(dk) / di.cross(dk);
            inner.push(ai + di * s);
        }
        let valid = inner.iter().all(|&q| p.contains_strictly(q))
            && (0..l).all(|i| {
                let j = (i + l - 1) % l;
                orient(inner[j], inner[i], p.vertex(i as isize)) == Orientation::Clockwise
                    && p.inward_offset(i, inner[i]) > 0.0
            })
            && Polygon::new(inner.clone()).is_ok();
        if !valid {
            return full();
        }
        let verts = p.vertices();
        let mut cells = Vec::with_capacity(2 * l);
        for i in 0..l {
            let j = (i + l - 1) % l;
            cells.push([verts[j], verts[i], inner[i]]);
            cells.push([verts[j], inner[i], inner[j]]);
        }
        let sampler = CellSampler::from_cells(cells);
        let mean = n * sampler.area() / p.area();
        Self { sampler, mean }
    }

    /// Expected number of points drawn per configuration.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn draw(&self, stream: RandomStream, out: &mut Vec<Point>) {
        let mut rng = stream.rng();
        let k = poisson_count(&mut rng, self.mean);
        out.clear();
        self.sampler.fill(&mut rng, k as usize, out);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailCheck {
    pub edge: usize,
    pub x: f64,
    pub empirical: f64,
    pub stderr: f64,
    pub bound: f64,
}

/// `P(d(Z_i, e_i) ≥ x)` under the Poisson model against `exp(−n (ℓ_i/2) x)`.
pub fn tail_probability_check(
    p: &Polygon,
    n: f64,
    x: f64,
    reps: u64,
    stream: RandomStream,
) -> Result<Vec<TailCheck>> {
    tail_probability_check_per_edge(p, n, &vec![x; p.len()], reps, stream)
}

pub fn tail_probability_check_per_edge(
    p: &Polygon,
    n: f64,
    xs: &[f64],
    reps: u64,
    stream: RandomStream,
) -> Result<Vec<TailCheck>> {
    if xs.len() != p.len() || xs.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(invalid("need one positive x per edge"));
    }
    if reps == 0 {
        return Err(invalid("reps must be positive"));
    }
    let l = p.len();
    let sampler = EdgeStripSampler::new(p, n, xs);
    let empty: Vec<Vec<bool>> = (0..reps)
        .into_par_iter()
        .map_init(Vec::new, |pts, r| {
            sampler.draw(stream.substream(r), pts);
            (0..l)
                .map(|i| pts.iter().all(|&q| p.inward_offset(i, q) >= xs[i]))
                .collect()
        })
        .collect();
    let lengths = p.metrics().edge_lengths;
    Ok((0..l)
        .map(|i| {
            let hits = empty.iter().filter(|e| e[i]).count() as f64;
            let frac = hits / reps as f64;
            TailCheck {
                edge: i,
                x: xs[i],
                empirical: frac,
                stderr: (frac * (1.0 - frac) / reps as f64).sqrt(),
                bound: (-n * lengths[i] / 2.0 * xs[i]).exp(),
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EventRate {
    pub reps: u64,
    /// Empirical `P(not 𝓔)`.
    pub rate: f64,
    pub stderr: f64,
    pub lower_curve: f64,
    pub upper_curve: f64,
}

/// Empirical `P(not 𝓔)` under the Poisson model, with the reference curves
/// `n⁻¹` and `n^{−1/4}`.
pub fn event_e_rate(p: &Polygon, n: f64, reps: u64, stream: RandomStream) -> Result<EventRate> {
    if reps == 0 {
        return Err(invalid("reps must be positive"));
    }
    let flags = corner_runs(p, n, reps, stream, Conditioning::EventE, |_, _| ())?;
    let fails = flags.iter().filter(|f| f.is_none()).count() as f64;
    let rate = fails / reps as f64;
    Ok(EventRate {
        reps,
        rate,
        stderr: (rate * (1.0 - rate) / reps as f64).sqrt(),
        lower_curve: 1.0 / n,
        upper_curve: n.powf(-0.25),
    })
}

/// Which replications enter the conditional moments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Conditioning {
    /// The full regularity event `𝓔`.
    EventE,
    /// Only `d(Z_i, e_i) ≤ n^{-3/4}` and distinct `Z_i`, without the lower
    /// bound on the lengths `δ_{i,j}`.
    EdgeOnly,
}

impl Conditioning {
    fn accepts(self, dec: &CornerDecomposition, n: f64) -> bool {
        match self {
            Conditioning::EventE => dec.event_e,
            Conditioning::EdgeOnly => {
                let near = n.powf(-0.75);
                dec.all_distinct() && dec.edge_dist.iter().all(|&d| d <= near)
            }
        }
    }
}

/// Runs `reps` Poisson configurations and applies `f` to the accepted ones.
fn corner_runs<T: Send>(
    p: &Polygon,
    n: f64,
    reps: u64,
    stream: RandomStream,
    cond: Conditioning,
    f: impl Fn(&CornerDecomposition, &[Point]) -> T + Sync,
) -> Result<Vec<Option<T>>> {
    let w = n.powf(-0.75);
    let sampler = EdgeStripSampler::new(p, n, &vec![w; p.len()]);
    Ok((0..reps)
        .into_par_iter()
        .map_init(Vec::new, |pts, r| {
            sampler.draw(stream.substream(r), pts);
            if pts.is_empty() {
                return None;
            }
            let dec = build_decomposition(p, pts, n).expect("nonempty sample");
            cond.accepts(&dec, n).then(|| f(&dec, pts))
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentRow {
    pub quantity: String,
    pub i: usize,
    pub k: usize,
    pub estimate: f64,
    pub stderr: f64,
    pub predicted: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogMomentTable {
    pub n: f64,
    pub reps: u64,
    pub accepted: u64,
    /// `E[log δ_{i,k} | 𝓔]` for `k ∈ {i, i+1}`.
    pub log_delta: Vec<MomentRow>,
    pub log_area_mean: Vec<MomentRow>,
    pub log_area_var: Vec<MomentRow>,
    /// `Cov[log area Δ_i, log area Δ_k | 𝓔]` for `i < k`.
    pub log_area_cov: Vec<MomentRow>,
    pub conditioning: Conditioning,
}

impl LogMomentTable {
    pub fn rows(&self) -> impl Iterator<Item = &MomentRow> {
        self.log_delta
            .iter()
            .chain(&self.log_area_mean)
            .chain(&self.log_area_var)
            .chain(&self.log_area_cov)
    }
}

pub const MIN_ACCEPTED: u64 = 100;

/// Conditional log moments of the corner lengths and areas given `𝓔`,
/// estimated by rejection. `p` must have unit area.
pub fn log_moment_estimates(
    p: &Polygon,
    n: f64,
    reps: u64,
    stream: RandomStream,
) -> Result<LogMomentTable> {
    log_moment_estimates_with(p, n, reps, stream, Conditioning::EventE)
}

pub fn log_moment_estimates_with(
    p: &Polygon,
    n: f64,
    reps: u64,
    stream: RandomStream,
    cond: Conditioning,
) -> Result<LogMomentTable> {
    if (p.area() - 1.0).abs() > 1e-9 {
        return Err(invalid("corner log moments need a unit-area container"));
    }
    if !(n > 1.0) {
        return Err(invalid(format!("n must exceed 1, got {n}")));
    }
    let m = p.metrics();
    let l = m.ell;
    let min_sin = m.angles.iter().map(|a| a.sin()).fold(f64::INFINITY, f64::min);
    let area_floor = 0.5 * min_sin / n.sqrt();
    let runs = corner_runs(p, n, reps, stream, cond, |dec, _| {
        let mut logs = Vec::with_capacity(3 * l);
        for i in 0..l {
            logs.push(dec.delta[i][0].ln());
            logs.push(dec.delta[i][1].ln());
        }
        for i in 0..l {
            let a = dec.triangle_area(i);
            assert!(
                cond != Conditioning::EventE || a >= area_floor * (1.0 - 1e-9),
                "corner triangle {i} below its floor: {a} < {area_floor}"
            );
            logs.push(a.ln());
        }
        logs
    })?;
    let accepted: Vec<Vec<f64>> = runs.into_iter().flatten().collect();
    let acc = accepted.len() as u64;
    if acc < MIN_ACCEPTED {
        return Err(Error::TooFewAccepted {
            accepted: acc,
            reps,
            rate: acc as f64 / reps as f64,
            required: MIN_ACCEPTED,
        });
    }
    let column = |c: usize| accepted.iter().map(|r| r[c]).collect::<Vec<f64>>();
    let mut log_delta = Vec::with_capacity(2 * l);
    for i in 0..l {
        for side in 0..2 {
            let k = (i + side) % l;
            let s = summarize(&column(2 * i + side));
            log_delta.push(MomentRow {
                quantity: "log_delta".into(),
                i,
                k,
                estimate: s.mean,
                stderr: s.stderr_mean,
                predicted: m.edge_lengths[k].ln() - 1.0,
            });
        }
    }
    let areas: Vec<Vec<f64>> = (0..l).map(|i| column(2 * l + i)).collect();
    let mut log_area_mean = Vec::with_capacity(l);
    let mut log_area_var = Vec::with_capacity(l);
    for (i, col) in areas.iter().enumerate() {
        let s = summarize(col);
        log_area_mean.push(MomentRow {
            quantity: "log_area_mean".into(),
            i,
            k: i,
            estimate: s.mean,
            stderr: s.stderr_mean,
            predicted: m.corner_areas[i].ln() - 2.0,
        });
        log_area_var.push(MomentRow {
            quantity: "log_area_var".into(),
            i,
            k: i,
            estimate: s.variance,
            stderr: s.stderr_var,
            predicted: 2.0,
        });
    }
    let mut log_area_cov = Vec::new();
    for i in 0..l {
        for k in (i + 1)..l {
            let (c, se) = covariance(&areas[i], &areas[k]);
            let adjacent = k == i + 1 || (i == 0 && k == l - 1);
            log_area_cov.push(MomentRow {
                quantity: "log_area_cov".into(),
                i,
                k,
                estimate: c,
                stderr: se,
                predicted: if adjacent { 1.0 - PI * PI / 6.0 } else { 0.0 },
            });
        }
    }
    Ok(LogMomentTable {
        n,
        reps,
        accepted: acc,
        log_delta,
        log_area_mean,
        log_area_var,
        log_area_cov,
        conditioning: cond,
    })
}
