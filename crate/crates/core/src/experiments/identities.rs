use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use super::moments::{hull_samples, in_pool};
use crate::error::{invalid, Result};
use crate::geometry::Polygon;
use crate::sampling::RandomStream;
use crate::stats::summarize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub n: u64,
    pub reps: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub stderr: f64,
}

impl IdentityCheck {
    pub fn residual(&self) -> f64 {
        self.lhs - self.rhs
    }

    /// `|lhs − rhs| ≤ 4·stderr`, or exact equality when both sides are
    /// deterministic.
    pub fn holds(&self) -> bool {
        self.residual().abs() <= 4.0 * self.stderr
    }
}

/// Independent streams for the three sample sizes `n`, `n+1`, `n+2`.
fn side_stream(root_seed: u64, n: u64, side: u64) -> RandomStream {
    RandomStream::new(root_seed, 3 * n + side)
}

/// `E area(P_n)/area(P)` against `1 − E f₀(P_{n+1})/(n+1)`.
pub fn efron_check(
    p: &Polygon,
    n: u64,
    reps: u64,
    root_seed: u64,
    threads: Option<usize>,
) -> Result<IdentityCheck> {
    if n < 1 || reps < 2 {
        return Err(invalid("efron check needs n >= 1 and reps >= 2"));
    }
    let area = p.area();
    let (at_n, at_n1) = in_pool(threads, || {
        (
            hull_samples(p, n, reps, side_stream(root_seed, n, 0)),
            hull_samples(p, n + 1, reps, side_stream(root_seed, n, 1)),
        )
    })?;
    let areas: Vec<f64> = at_n.iter().map(|s| s.1 / area).collect();
    let f0: Vec<f64> = at_n1.iter().map(|s| s.0).collect();
    let a = summarize(&areas);
    let f = summarize(&f0);
    let m = (n + 1) as f64;
    Ok(IdentityCheck {
        identity: "efron",
        n,
        reps,
        lhs: a.mean,
        rhs: 1.0 - f.mean / m,
        stderr: (a.stderr_mean.powi(2) + (f.stderr_mean / m).powi(2)).sqrt(),
    })
}

/// `Var area(P_n)/area(P)²` against
/// `(Var f₀(P_{n+2}) + A_n − B_n) / ((n+1)(n+2))`.
pub fn buchta_check(
    p: &Polygon,
    n: u64,
    reps: u64,
    root_seed: u64,
    threads: Option<usize>,
) -> Result<IdentityCheck> {
    if n < 1 || reps < 2 {
        return Err(invalid("buchta check needs n >= 1 and reps >= 2"));
    }
    let area = p.area();
    let (at_n, at_n1, at_n2) = in_pool(threads, || {
        (
            hull_samples(p, n, reps, side_stream(root_seed, n, 0)),
            hull_samples(p, n + 1, reps, side_stream(root_seed, n, 1)),
            hull_samples(p, n + 2, reps, side_stream(root_seed, n, 2)),
        )
    })?;
    let areas: Vec<f64> = at_n.iter().map(|s| s.1 / area).collect();
    let f1: Vec<f64> = at_n1.iter().map(|s| s.0).collect();
    let f2: Vec<f64> = at_n2.iter().map(|s| s.0).collect();
    let a = summarize(&areas);
    let s1 = summarize(&f1);
    let r = reps as f64;
    let nf = n as f64;
    let ratio = (nf + 2.0) / (nf + 1.0);
    // Vertex counts are integers, so these sums are exact. Writing the
    // estimate over them keeps the right side exactly 0 for n ≤ 2.
    let sum = |xs: &[f64]| xs.iter().sum::<f64>();
    let sum_sq = |xs: &[f64]| xs.iter().map(|x| x * x).sum::<f64>();
    let (t1, q1) = (sum(&f1), sum_sq(&f1));
    let (t2, q2) = (sum(&f2), sum_sq(&f2));
    // r times the unbiased estimate of (E f₀(P_{n+1}))².
    let mu1_sq_r = (t1 * t1 - q1) / (r - 1.0);
    let d = (nf + 1.0) * (nf + 2.0);
    let numer = (q2 - (2.0 * nf + 3.0) * t2) + 2.0 * (nf + 2.0) * t1 - (nf + 2.0) * mu1_sq_r / (nf + 1.0);
    let rhs = numer / (r * d);
    let g1 = (2.0 * (nf + 2.0) - 2.0 * ratio * s1.mean) / d;
    // The f₀(P_{n+2}) part is the sample mean of f² − (2n+3)f.
    let poly: Vec<f64> = f2.iter().map(|f| f * f - (2.0 * nf + 3.0) * f).collect();
    let var_rhs = (g1 * s1.stderr_mean).powi(2) + (summarize(&poly).stderr_mean / d).powi(2);
    Ok(IdentityCheck {
        identity: "buchta",
        n,
        reps,
        lhs: a.variance,
        rhs,
        stderr: (a.stderr_var.powi(2) + var_rhs).sqrt(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VervaatRow {
    pub n: u64,
    pub p: f64,
    pub k: u32,
    pub sum: f64,
    pub bound: f64,
    pub holds: bool,
    /// `np²(3 + 2np)` for `k = 2`, the constant obtained by adding the
    /// `k = 1` bound to the bound on `Σ m(m−1)|…|`; equal to `bound`
    /// otherwise.
    pub derived_bound: f64,
}

/// `Σ_m m^k |Poisson(np){m} − Binomial(n,p){m}|` against `2p`, `2np²` or
/// `2np²(1+np)` for `k = 0, 1, 2`.
///
/// Writing `b_m/π_m = exp(d_m)` with
/// `d_m = Σ_{j<m} log(1 − j/n) + (n−m) log(1−p) + np`, each term is
/// `m^k π_m |expm1(d_m)|`, which keeps full relative precision when the two
/// masses nearly agree.
pub fn vervaat_check(n: u64, p: f64, k: u32) -> Result<VervaatRow> {
    if n == 0 || !(p > 0.0 && p < 1.0) || k > 2 {
        return Err(invalid(format!("need n >= 1, 0 < p < 1, k in 0..=2; got {n}, {p}, {k}")));
    }
    let nf = n as f64;
    let lambda = nf * p;
    let ln_lambda = lambda.ln();
    let log_q = (-p).ln_1p();
    let stop = lambda + 50.0 * (lambda + 1.0).sqrt();
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let mut prefix = 0.0f64;
    let mut m: u64 = 0;
    loop {
        let mf = m as f64;
        let ln_pi = -lambda + mf * ln_lambda - ln_gamma(mf + 1.0);
        let pi = ln_pi.exp();
        let diff = if m <= n {
            let d = prefix + (nf - mf) * log_q + lambda;
            pi * d.exp_m1().abs()
        } else {
            pi
        };
        let term = mf.powi(k as i32) * diff;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if mf > stop && term < 1e-18 {
            break;
        }
        if m < n {
            prefix += (-(mf / nf)).ln_1p();
        }
        m += 1;
    }
    let bound = match k {
        0 => 2.0 * p,
        1 => 2.0 * nf * p * p,
        _ => 2.0 * nf * p * p * (1.0 + lambda),
    };
    let derived_bound = if k == 2 {
        nf * p * p * (3.0 + 2.0 * lambda)
    } else {
        bound
    };
    Ok(VervaatRow {
        n,
        p,
        k,
        sum,
        bound,
        holds: sum <= bound,
        derived_bound,
    })
}

/// The 27-point grid `n ∈ {10, 10², 10³}`, `p ∈ {10⁻³, 10⁻², 10⁻¹}`,
/// `k ∈ {0, 1, 2}`.
pub fn vervaat_grid() -> Result<Vec<VervaatRow>> {
    let mut rows = Vec::with_capacity(27);
    for n in [10, 100, 1000] {
        for p in [1e-3, 1e-2, 1e-1] {
            for k in 0..=2 {
                rows.push(vervaat_check(n, p, k)?);
            }
        }
    }
    Ok(rows)
}
