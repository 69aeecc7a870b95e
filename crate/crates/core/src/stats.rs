//! Summary statistics shared by the simulation drivers.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

/// Sample moments of a batch of replications.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub reps: u64,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub stderr_mean: f64,
    /// Delta-method error of the sample variance from the fourth central
    /// moment.
    pub stderr_var: f64,
    pub m3: f64,
    pub m4: f64,
}

pub fn summarize(xs: &[f64]) -> Summary {
    let n = xs.len();
    let nf = n as f64;
    let mean = if n == 0 { f64::NAN } else { xs.iter().sum::<f64>() / nf };
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in xs {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    if n < 2 {
        return Summary {
            reps: n as u64,
            mean,
            variance: f64::NAN,
            stderr_mean: f64::NAN,
            stderr_var: f64::NAN,
            m3: f64::NAN,
            m4: f64::NAN,
        };
    }
    let variance = m2 / (nf - 1.0);
    let (m2n, m3n, m4n) = (m2 / nf, m3 / nf, m4 / nf);
    let var_of_var = (m4n - (nf - 3.0) / (nf - 1.0) * m2n * m2n) / nf;
    Summary {
        reps: n as u64,
        mean,
        variance,
        stderr_mean: (variance / nf).sqrt(),
        stderr_var: var_of_var.max(0.0).sqrt(),
        m3: m3n,
        m4: m4n,
    }
}

/// Sample covariance and its standard error.
pub fn covariance(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let prods: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).collect();
    let s = summarize(&prods);
    (s.mean * n / (n - 1.0), s.stderr_mean)
}

/// Kolmogorov distance between the empirical law of `(x − mean)/sd` and the
/// standard normal. Ties and lattice-valued data are handled by comparing
/// both sides of every jump of the empirical distribution function.
pub fn ks_to_normal(xs: &[f64], mean: f64, sd: f64) -> f64 {
    let phi = Normal::new(0.0, 1.0).unwrap();
    let mut z: Vec<f64> = xs.iter().map(|x| (x - mean) / sd).collect();
    z.sort_by(f64::total_cmp);
    let n = z.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < z.len() {
        let mut j = i;
        while j < z.len() && z[j] == z[i] {
            j += 1;
        }
        let f = phi.cdf(z[i]);
        d = d.max((i as f64 / n - f).abs()).max((j as f64 / n - f).abs());
        i = j;
    }
    d
}

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    Normal::new(0.0, 1.0).unwrap().cdf(x)
}
