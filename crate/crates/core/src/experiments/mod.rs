//! Simulation drivers: vertex-number moments and their predictions,
//! Berry–Esseen rate curves, the Efron and Buchta identities and the
//! Poisson–binomial coupling bounds.

mod identities;
mod moments;

pub use identities::{buchta_check, efron_check, vervaat_check, vervaat_grid, IdentityCheck, VervaatRow};
pub use moments::{
    berry_esseen_curve, hull_samples, ks_nonincreasing, model_gap, predicted_moments, run_experiment,
    ExperimentConfig, ExperimentSummary, GapRow, Model, PredictedMoments, RateRow,
};

pub(crate) use moments::in_pool;

use crate::error::{invalid, Result};

/// Kolmogorov distance of `(x − mean)/sd` to Φ.
pub fn ks_to_normal(sample: &[f64], mean: f64, sd: f64) -> Result<f64> {
    if !(sd > 0.0) {
        return Err(invalid(format!("sd must be positive, got {sd}")));
    }
    if sample.is_empty() {
        return Err(invalid("empty sample"));
    }
    Ok(crate::stats::ks_to_normal(sample, mean, sd))
}
