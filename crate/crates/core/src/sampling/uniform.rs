use rand::Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use serde::Serialize;

use super::stream::{RandomStream, StreamRng};
use crate::geometry::{triangle_area, Point, Polygon};

/// Uniform sampler over a union of triangles.
///
/// A cell is chosen with probability proportional to its area, then a point
/// is drawn in it with square-root barycentric coordinates. Every step is an
/// affine combination of the cell vertices, so the sampler commutes with
/// affine maps applied to the cells.
#[derive(Clone, Debug)]
pub struct CellSampler {
    cells: Vec<[Point; 3]>,
    cumulative: Vec<f64>,
    area: f64,
}

impl CellSampler {
    pub fn from_cells(cells: Vec<[Point; 3]>) -> Self {
        let areas: Vec<f64> = cells
            .iter()
            .map(|c| triangle_area(c[0], c[1], c[2]))
            .collect();
        let area: f64 = areas.iter().sum();
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = areas
            .iter()
            .map(|a| {
                acc += a;
                acc / area
            })
            .collect();
        if let Some(last) = cumulative.last_mut() {
            *last = 1.0;
        }
        Self {
            cells,
            cumulative,
            area,
        }
    }

    /// Fan triangulation of `p` from its first vertex.
    pub fn fan(p: &Polygon) -> Self {
        Self::from_cells(p.fan_cells().collect())
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn cells(&self) -> &[[Point; 3]] {
        &self.cells
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let cell = if self.cells.len() == 1 {
            &self.cells[0]
        } else {
            let u: f64 = rng.random();
            let k = self.cumulative.partition_point(|&c| c <= u);
            &self.cells[k.min(self.cells.len() - 1)]
        };
        let r1 = rng.random::<f64>().sqrt();
        let r2: f64 = rng.random();
        let [a, b, c] = *cell;
        a * (1.0 - r1) + b * (r1 * (1.0 - r2)) + c * (r1 * r2)
    }

    pub fn fill<R: Rng + ?Sized>(&self, rng: &mut R, count: usize, out: &mut Vec<Point>) {
        out.reserve(count);
        for _ in 0..count {
            out.push(self.sample(rng));
        }
    }
}

/// One uniform point in `p`.
pub fn uniform_point<R: Rng + ?Sized>(p: &Polygon, rng: &mut R) -> Point {
    CellSampler::fan(p).sample(rng)
}

/// Which point process produced a sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "model", content = "n", rename_all = "lowercase")]
pub enum SampleModel {
    /// Exactly `n` i.i.d. uniform points.
    Binomial(u64),
    /// Poisson process with the given expected count.
    Poisson(f64),
}

/// A realized point configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSample {
    pub points: Vec<Point>,
    pub model: SampleModel,
    pub stream: RandomStream,
}

impl PointSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn binomial_sample(p: &Polygon, n: u64, stream: RandomStream) -> PointSample {
    let sampler = CellSampler::fan(p);
    let mut rng = stream.rng();
    let mut points = Vec::new();
    sampler.fill(&mut rng, n as usize, &mut points);
    PointSample {
        points,
        model: SampleModel::Binomial(n),
        stream,
    }
}

/// Poisson process of intensity `expected_count / area(p)` on `p`: a Poisson
/// count followed by that many i.i.d. uniform points.
pub fn poisson_sample(p: &Polygon, expected_count: f64, stream: RandomStream) -> PointSample {
    let sampler = CellSampler::fan(p);
    let mut rng = stream.rng();
    let count = poisson_count(&mut rng, expected_count);
    let mut points = Vec::new();
    sampler.fill(&mut rng, count as usize, &mut points);
    PointSample {
        points,
        model: SampleModel::Poisson(expected_count),
        stream,
    }
}

/// Exact Poisson variate (multiplication method below mean 12, transformed
/// rejection above; no normal approximation).
pub fn poisson_count(rng: &mut StreamRng, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let d = Poisson::new(mean).expect("finite positive Poisson mean");
    d.sample(rng) as u64
}

/// Exact binomial variate.
pub fn binomial_count(rng: &mut StreamRng, n: u64, p: f64) -> u64 {
    if p <= 0.0 || n == 0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    Binomial::new(n, p).expect("valid binomial").sample(rng)
}
