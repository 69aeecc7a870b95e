use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::EULER_GAMMA;
use crate::corners::build_decomposition;
use crate::error::{invalid, Result};
use crate::floating_body::{EventChecker, EventParams};
use crate::geometry::{signed_ring_area, Polygon};
use crate::sampling::{RandomStream, SampleModel, ShellDraw, ShellSampler};
use crate::stats::summarize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Binomial,
    Poisson,
}

impl Model {
    pub fn sample_model(self, n: f64) -> SampleModel {
        match self {
            Model::Binomial => SampleModel::Binomial(n as u64),
            Model::Poisson => SampleModel::Poisson(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PredictedMoments {
    pub mean: f64,
    pub variance: f64,
    /// Order of the neglected remainder terms (mean, variance).
    pub remainder: [&'static str; 2],
}

/// Leading-order mean and variance of the vertex number for `n` points in
/// `p`. Both models share the same expansion; only the ratios `F_i/area(P)`
/// enter, so the result is scale invariant.
pub fn predicted_moments(p: &Polygon, n: f64, _model: Model) -> Result<PredictedMoments> {
    if !(n > 1.0 && n.is_finite()) {
        return Err(invalid(format!("n must exceed 1, got {n}")));
    }
    let m = p.metrics();
    let l = m.ell as f64;
    let log_ratios: f64 = m.corner_areas.iter().map(|f| (f / m.total_area).ln()).sum();
    let ln = n.ln();
    Ok(PredictedMoments {
        mean: 2.0 * l / 3.0 * ln + 2.0 / 3.0 * log_ratios + 2.0 * EULER_GAMMA * l / 3.0,
        variance: 10.0 * l / 27.0 * ln
            + 10.0 / 27.0 * log_ratios
            + (10.0 * EULER_GAMMA - 2.0 * PI * PI) * l / 27.0,
        remainder: ["(log n)^2 n^(-1/4)", "(log n)^4 n^(-1/4)"],
    })
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub container: Polygon,
    pub container_label: String,
    pub model: Model,
    pub n: f64,
    pub reps: u64,
    pub root_seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Also evaluate the floating-body events A and B.
    pub events: Option<EventParams>,
}

impl ExperimentConfig {
    pub fn new(container: Polygon, label: impl Into<String>, model: Model, n: f64, reps: u64, root_seed: u64) -> Self {
        Self {
            container,
            container_label: label.into(),
            model,
            n,
            reps,
            root_seed,
            threads: None,
            events: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps < 2 {
            return Err(invalid("reps must be at least 2"));
        }
        match self.model {
            Model::Binomial if !(self.n >= 3.0 && self.n.fract() == 0.0 && self.n < 1e12) => {
                Err(invalid(format!("binomial n must be an integer >= 3, got {}", self.n)))
            }
            Model::Poisson if !(self.n >= 0.0 && self.n.is_finite()) => {
                Err(invalid(format!("poisson n must be non-negative, got {}", self.n)))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub container: String,
    pub model: Model,
    pub n: f64,
    pub reps: u64,
    pub root_seed: u64,
    pub mean: f64,
    pub variance: f64,
    pub stderr_mean: f64,
    pub stderr_var: f64,
    pub predicted: Option<PredictedMoments>,
    /// KS distance of f₀ standardized by its sample mean and sd.
    pub ks: Option<f64>,
    /// KS distance of f₀ standardized by the predicted moments.
    pub ks_predicted: Option<f64>,
    /// Empirical `P(not 𝓔)`.
    pub rate_not_e: f64,
    pub rate_a: Option<f64>,
    pub rate_b: Option<f64>,
    /// Share of the container sampled first; 1 when the plain sampler ran.
    pub shell_fraction: f64,
    pub runtime_seconds: f64,
    #[serde(skip)]
    pub f0: Vec<f64>,
}

struct Rep {
    f0: f64,
    not_e: bool,
    a: bool,
    b: bool,
}

pub(crate) fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| invalid(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Runs `cfg.reps` independent replications; replication `i` draws from
/// `RandomStream::new(root_seed, 0).substream(i)`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    cfg.validate()?;
    let start = Instant::now();
    let p = &cfg.container;
    let n = cfg.n;
    let model = cfg.model.sample_model(n);
    let checker = match cfg.events {
        Some(params) if n > 1.0 => Some(EventChecker::new(p, n, params)?),
        _ => None,
    };
    let mut depth = if n > 0.0 { 30.0 / n } else { f64::INFINITY };
    if let Some(params) = cfg.events {
        if n > 1.0 {
            depth = depth.max(params.delta(n));
        }
    }
    let sampler = ShellSampler::with_depth(p, depth * p.area());
    let root = RandomStream::new(cfg.root_seed, 0);
    let reps: Vec<Rep> = in_pool(cfg.threads, || {
        (0..cfg.reps)
            .into_par_iter()
            .map_init(ShellDraw::default, |draw, i| {
                let mut rng = root.substream(i).rng();
                let f0 = sampler.draw(model, &mut rng, draw);
                let hull = draw.hull_vertices();
                let not_e = hull.is_empty()
                    || !build_decomposition(p, hull, n.max(1.0)).is_ok_and(|d| d.event_e);
                let (a, b) = match &checker {
                    Some(c) => {
                        let ev = c.check(&draw.points, hull);
                        (ev.a, ev.b)
                    }
                    None => (false, false),
                };
                Rep {
                    f0: f0 as f64,
                    not_e,
                    a,
                    b,
                }
            })
            .collect()
    })?;
    let f0: Vec<f64> = reps.iter().map(|r| r.f0).collect();
    let s = summarize(&f0);
    let predicted = if n > 1.0 {
        Some(predicted_moments(p, n, cfg.model)?)
    } else {
        None
    };
    let ks = (s.variance > 0.0).then(|| crate::stats::ks_to_normal(&f0, s.mean, s.variance.sqrt()));
    let ks_predicted = predicted
        .as_ref()
        .filter(|m| m.variance > 0.0)
        .map(|m| crate::stats::ks_to_normal(&f0, m.mean, m.variance.sqrt()));
    let frac = |f: fn(&Rep) -> bool| reps.iter().filter(|r| f(r)).count() as f64 / cfg.reps as f64;
    Ok(ExperimentSummary {
        container: cfg.container_label.clone(),
        model: cfg.model,
        n,
        reps: cfg.reps,
        root_seed: cfg.root_seed,
        mean: s.mean,
        variance: s.variance,
        stderr_mean: s.stderr_mean,
        stderr_var: s.stderr_var,
        predicted,
        ks,
        ks_predicted,
        rate_not_e: frac(|r| r.not_e),
        rate_a: checker.as_ref().map(|_| frac(|r| r.a)),
        rate_b: checker.as_ref().map(|_| frac(|r| r.b)),
        shell_fraction: sampler.shell_fraction(),
        runtime_seconds: start.elapsed().as_secs_f64(),
        f0,
    })
}

/// Vertex numbers and hull areas of `reps` binomial samples of size `n`.
pub fn hull_samples(p: &Polygon, n: u64, reps: u64, stream: RandomStream) -> Vec<(f64, f64)> {
    let sampler = if n >= 3 {
        ShellSampler::for_intensity(p, n as f64)
    } else {
        ShellSampler::plain(p)
    };
    (0..reps)
        .into_par_iter()
        .map_init(ShellDraw::default, |draw, i| {
            let mut rng = stream.substream(i).rng();
            let f0 = sampler.draw(SampleModel::Binomial(n), &mut rng, draw);
            let hull = draw.hull_vertices();
            let area = if hull.len() >= 3 { signed_ring_area(hull) } else { 0.0 };
            (f0 as f64, area)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateRow {
    pub n: f64,
    pub reps: u64,
    pub ks: f64,
    pub ks_scaled: f64,
    /// `1/√reps`, the scale of KS sampling noise.
    pub noise: f64,
    /// KS noise of this many replications swamps the rate signal.
    pub noise_dominated: bool,
}

/// KS distance to Φ and its rescaling by `√log n` for each `n`.
pub fn berry_esseen_curve(
    p: &Polygon,
    label: &str,
    model: Model,
    n_list: &[f64],
    reps: u64,
    root_seed: u64,
    threads: Option<usize>,
) -> Result<Vec<RateRow>> {
    n_list
        .iter()
        .enumerate()
        .map(|(j, &n)| {
            if !(n > std::f64::consts::E) {
                return Err(invalid(format!("each n must exceed e, got {n}")));
            }
            let mut cfg = ExperimentConfig::new(
                p.clone(),
                label,
                model,
                n,
                reps,
                root_seed.wrapping_add(j as u64),
            );
            cfg.threads = threads;
            let out = run_experiment(&cfg)?;
            let ks = out.ks.unwrap_or(1.0);
            let noise = 1.0 / (reps as f64).sqrt();
            Ok(RateRow {
                n,
                reps,
                ks,
                ks_scaled: ks * n.ln().sqrt(),
                noise,
                noise_dominated: 1.36 * noise > 0.05,
            })
        })
        .collect()
}

/// `KS_{j+1} ≤ KS_j + 2·noise` along the rows.
pub fn ks_nonincreasing(rows: &[RateRow]) -> bool {
    rows.windows(2).all(|w| w[1].ks <= w[0].ks + 2.0 * w[0].noise.max(w[1].noise))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapRow {
    pub n: f64,
    pub binomial_mean: f64,
    pub poisson_mean: f64,
    pub gap: f64,
    pub stderr: f64,
}

/// Binomial against Poisson mean vertex number at equal `n`.
pub fn model_gap(
    p: &Polygon,
    n_list: &[f64],
    reps: u64,
    root_seed: u64,
    threads: Option<usize>,
) -> Result<Vec<GapRow>> {
    n_list
        .iter()
        .enumerate()
        .map(|(j, &n)| {
            let run = |model, k: u64| {
                let mut cfg = ExperimentConfig::new(
                    p.clone(),
                    "",
                    model,
                    n,
                    reps,
                    root_seed.wrapping_add(2 * j as u64 + k),
                );
                cfg.threads = threads;
                run_experiment(&cfg)
            };
            let b = run(Model::Binomial, 0)?;
            let q = run(Model::Poisson, 1)?;
            Ok(GapRow {
                n,
                binomial_mean: b.mean,
                poisson_mean: q.mean,
                gap: b.mean - q.mean,
                stderr: (b.stderr_mean.powi(2) + q.stderr_mean.powi(2)).sqrt(),
            })
        })
        .collect()
}
