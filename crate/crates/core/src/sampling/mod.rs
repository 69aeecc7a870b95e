//! Reproducible random streams and uniform point samplers for the binomial
//! and Poisson models.

mod shell;
mod stream;
mod uniform;

pub use shell::{ShellDraw, ShellSampler};
pub use stream::{splitmix64, RandomStream, StreamRng};
pub use uniform::{
    binomial_count, binomial_sample, poisson_count, poisson_sample, uniform_point, CellSampler,
    PointSample, SampleModel,
};
