use super::stream::StreamRng;
use super::uniform::{binomial_count, poisson_count, CellSampler, SampleModel};
use crate::floating_body::{in_ring, v_unchecked};
use crate::geometry::{HullScratch, Point, Polygon};

/// Two-stage sampler that draws the outer shell of the container first.
///
/// `P` is split into an inner polygon `Q` (a homothetic copy of `P` about its
/// centroid) and the shell `P \ Q`. Under either point model the shell and
/// `Q` receive independent uniform configurations with the exact binomial or
/// Poisson split of the count. When every vertex of `Q` already lies in the
/// hull of the shell points, points in `Q` cannot change the hull and are
/// never generated; otherwise they are drawn and the full hull is taken.
/// The hull therefore has exactly the law of the hull of a plain sample.
#[derive(Clone, Debug)]
pub struct ShellSampler {
    full: CellSampler,
    inner_ring: Vec<Point>,
    shell: Option<CellSampler>,
    inner: Option<CellSampler>,
    shell_fraction: f64,
}

/// Draw buffers reused across replications.
#[derive(Clone, Debug, Default)]
pub struct ShellDraw {
    /// Generated points: shell points, followed by the points in `Q` when
    /// those were needed.
    pub points: Vec<Point>,
    /// Total number of points of the configuration, generated or not.
    pub total: u64,
    pub hull: HullScratch,
    hull_vertices: Vec<Point>,
}

impl ShellDraw {
    pub fn hull_vertices(&self) -> &[Point] {
        &self.hull_vertices
    }

    pub fn f0(&self) -> usize {
        self.hull_vertices.len()
    }
}

/// Largest shell fraction for which the split is worth doing.
const MAX_SHELL_FRACTION: f64 = 0.5;

impl ShellSampler {
    /// Plain sampler without a shell split.
    pub fn plain(p: &Polygon) -> Self {
        Self {
            full: CellSampler::fan(p),
            inner_ring: Vec::new(),
            shell: None,
            inner: None,
            shell_fraction: 1.0,
        }
    }

    /// Chooses the largest `Q` whose vertices all have `v ≥ depth`.
    pub fn with_depth(p: &Polygon, depth: f64) -> Self {
        let c = p.centroid();
        let min_v = |s: f64| {
            p.vertices()
                .iter()
                .map(|&w| v_unchecked(p, c + (w - c) * s))
                .fold(f64::INFINITY, f64::min)
        };
        if !(depth > 0.0) || v_unchecked(p, c) < depth {
            return Self::plain(p);
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if min_v(mid) >= depth {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let s = lo;
        let shell_fraction = 1.0 - s * s;
        if s <= 0.0 || shell_fraction > MAX_SHELL_FRACTION {
            return Self::plain(p);
        }
        let verts = p.vertices();
        let inner_ring: Vec<Point> = verts.iter().map(|&w| c + (w - c) * s).collect();
        let k = verts.len();
        let mut cells = Vec::with_capacity(2 * k);
        for i in 0..k {
            let j = (i + 1) % k;
            cells.push([verts[i], verts[j], inner_ring[j]]);
            cells.push([verts[i], inner_ring[j], inner_ring[i]]);
        }
        let inner = Polygon::new(inner_ring.clone()).expect("homothetic copy is convex");
        Self {
            full: CellSampler::fan(p),
            inner_ring,
            shell: Some(CellSampler::from_cells(cells)),
            inner: Some(CellSampler::fan(&inner)),
            shell_fraction,
        }
    }

    /// Depth used for `n` expected points: deep enough that `Q` is covered
    /// by the hull in all but a vanishing fraction of draws.
    pub fn for_intensity(p: &Polygon, n: f64) -> Self {
        let depth_fraction = (30.0 / n).max(n.ln() / n);
        Self::with_depth(p, depth_fraction * p.area())
    }

    /// Share of the area in the shell; `1` for the plain sampler.
    pub fn shell_fraction(&self) -> f64 {
        self.shell_fraction
    }

    pub fn inner_ring(&self) -> &[Point] {
        &self.inner_ring
    }

    /// One configuration under `model`; returns the hull vertex count.
    pub fn draw(&self, model: SampleModel, rng: &mut StreamRng, out: &mut ShellDraw) -> usize {
        out.points.clear();
        let (Some(shell), Some(inner)) = (&self.shell, &self.inner) else {
            let count = match model {
                SampleModel::Binomial(n) => n,
                SampleModel::Poisson(mean) => poisson_count(rng, mean),
            };
            self.full.fill(rng, count as usize, &mut out.points);
            out.total = count;
            return self.finish(out);
        };
        let (outer_count, inner_count) = match model {
            SampleModel::Binomial(n) => {
                let k = binomial_count(rng, n, self.shell_fraction);
                (k, n - k)
            }
            SampleModel::Poisson(mean) => (
                poisson_count(rng, mean * self.shell_fraction),
                poisson_count(rng, mean * (1.0 - self.shell_fraction)),
            ),
        };
        out.total = outer_count + inner_count;
        shell.fill(rng, outer_count as usize, &mut out.points);
        self.finish(out);
        let covered = out.hull_vertices.len() >= 3
            && self.inner_ring.iter().all(|&q| in_ring(&out.hull_vertices, q));
        if covered || inner_count == 0 {
            return out.f0();
        }
        inner.fill(rng, inner_count as usize, &mut out.points);
        self.finish(out)
    }

    fn finish(&self, out: &mut ShellDraw) -> usize {
        let v = out.hull.vertices(&out.points);
        out.hull_vertices.clear();
        out.hull_vertices.extend_from_slice(v);
        out.hull_vertices.len()
    }
}
