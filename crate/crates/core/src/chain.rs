//! Random convex chains in the canonical triangle.
//!
//! `T` has vertices `(0,1)`, `(0,0)`, `(1,0)`. A chain on points of `T` is the
//! convex hull of the points together with the anchors `(0,1)` and `(1,0)`;
//! `T_k` uses `k` i.i.d. uniform points, `T_χ` a Poisson process with mean
//! count `M`.

use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::geometry::{HullScratch, Point, Polygon};
use crate::sampling::{poisson_count, CellSampler, RandomStream};
use crate::stats::{summarize, Summary};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Chain anchors.
pub const ANCHOR_TOP: Point = Point { x: 0.0, y: 1.0 };
pub const ANCHOR_RIGHT: Point = Point { x: 1.0, y: 0.0 };

pub fn canonical_triangle() -> Polygon {
    Polygon::new(vec![ANCHOR_TOP, Point::ORIGIN, ANCHOR_RIGHT]).expect("canonical triangle")
}

/// `H_k = Σ_{i≤k} 1/i`, `H_0 = 0`.
pub fn harmonic(k: u64) -> f64 {
    compensated_sum((1..=k).rev().map(|i| 1.0 / i as f64))
}

/// `H⁽²⁾_k = Σ_{i≤k} 1/i²`, `H⁽²⁾_0 = 0`.
pub fn harmonic2(k: u64) -> f64 {
    compensated_sum((1..=k).rev().map(|i| {
        let x = i as f64;
        1.0 / (x * x)
    }))
}

fn compensated_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for t in terms {
        let y = t - c;
        let s = sum + y;
        c = (s - sum) - y;
        sum = s;
    }
    sum
}

/// `E f₀(T_k) = (2/3) H_k + 7/3`.
pub fn exact_chain_mean(k: u64) -> Result<f64> {
    if k == 0 {
        return Err(invalid("chain moment formulas require k >= 1"));
    }
    Ok(2.0 / 3.0 * harmonic(k) + 7.0 / 3.0)
}

/// `Var f₀(T_k) = (10/27) H_k + (4/9) H⁽²⁾_k − 28/27 + 4/(9(k+1))`.
pub fn exact_chain_var(k: u64) -> Result<f64> {
    if k == 0 {
        return Err(invalid("chain moment formulas require k >= 1"));
    }
    let kf = k as f64;
    // Grouped over the common denominator 27 so that k = 1 gives exactly 0.
    let v = (10.0 * harmonic(k) + 12.0 * harmonic2(k) - 28.0) / 27.0 + 4.0 / (9.0 * (kf + 1.0));
    Ok(v.max(0.0))
}

/// Leading terms of the mean and variance of `f₀(T_χ)` for mean count `M`.
pub fn poisson_chain_expansion(m: f64) -> Result<(f64, f64)> {
    if !(m > 1.0 && m.is_finite()) {
        return Err(invalid(format!("M must exceed 1, got {m}")));
    }
    let l = m.ln();
    let mean = 2.0 / 3.0 * l + (2.0 * EULER_GAMMA + 7.0) / 3.0;
    let var = 10.0 / 27.0 * l + (10.0 * EULER_GAMMA + 2.0 * PI * PI - 28.0) / 27.0;
    Ok((mean, var))
}

const SLACK: f64 = 1e-9;

fn in_triangle(p: Point) -> bool {
    p.x >= -SLACK && p.y >= -SLACK && p.x + p.y <= 1.0 + SLACK
}

/// `f₀` of the chain on `points`; the anchors always count.
pub fn chain_vertex_count(points: &[Point]) -> Result<usize> {
    if let Some(p) = points.iter().find(|p| !p.is_finite() || !in_triangle(**p)) {
        return Err(crate::error::Error::Geometry(
            crate::error::GeometryError::OutsideContainer { x: p.x, y: p.y },
        ));
    }
    let mut buf = Vec::with_capacity(points.len() + 2);
    Ok(chain_count_into(points, &mut buf, &mut HullScratch::default()))
}

pub(crate) fn chain_count_into(
    points: &[Point],
    buf: &mut Vec<Point>,
    hull: &mut HullScratch,
) -> usize {
    buf.clear();
    buf.push(ANCHOR_TOP);
    buf.push(ANCHOR_RIGHT);
    buf.extend_from_slice(points);
    hull.f0(buf)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "model", content = "value", rename_all = "lowercase")]
pub enum ChainModel {
    /// `k` i.i.d. uniform points.
    Fixed(u64),
    /// Poisson process with mean count `M`.
    Poisson(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainStats {
    pub model: ChainModel,
    pub reps: u64,
    pub mean: f64,
    pub variance: f64,
    pub stderr_mean: f64,
    pub stderr_var: f64,
    #[serde(skip)]
    pub counts: Vec<f64>,
}

impl ChainStats {
    pub fn summary(&self) -> Summary {
        summarize(&self.counts)
    }
}

/// Vertex counts of `reps` independent chains; replication `i` uses
/// `stream.substream(i)`, so the result does not depend on scheduling.
pub fn simulate_chain_counts(model: ChainModel, reps: u64, stream: RandomStream) -> Result<Vec<f64>> {
    if let ChainModel::Poisson(m) = model {
        if !(m >= 0.0 && m.is_finite()) {
            return Err(invalid(format!("M must be non-negative, got {m}")));
        }
    }
    let sampler = CellSampler::from_cells(vec![[ANCHOR_TOP, Point::ORIGIN, ANCHOR_RIGHT]]);
    Ok((0..reps)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new(), HullScratch::default()),
            |(pts, buf, hull), i| {
                let mut rng = stream.substream(i).rng();
                let k = match model {
                    ChainModel::Fixed(k) => k,
                    ChainModel::Poisson(m) => poisson_count(&mut rng, m),
                };
                pts.clear();
                sampler.fill(&mut rng, k as usize, pts);
                chain_count_into(pts, buf, hull) as f64
            },
        )
        .collect())
}

pub fn simulate_chain_batch(model: ChainModel, reps: u64, stream: RandomStream) -> Result<ChainStats> {
    if reps < 2 {
        return Err(invalid("reps must be at least 2"));
    }
    let counts = simulate_chain_counts(model, reps, stream)?;
    let s = summarize(&counts);
    Ok(ChainStats {
        model,
        reps,
        mean: s.mean,
        variance: s.variance,
        stderr_mean: s.stderr_mean,
        stderr_var: s.stderr_var,
        counts,
    })
}
