//! Exact moments and laws of the count variable, Monte Carlo estimation and comparison.

mod compare;
mod distribution;
mod moments;
mod montecarlo;

pub use compare::{compare_distributions, ComparisonReport};
pub use distribution::{exact_distribution, CountDistribution, DEFAULT_CELL_BUDGET};
pub use moments::{
    exact_covariance, exact_mean, exact_pair_moments, exact_variance, lattice_overlap_sum,
    MomentReport,
};
pub use montecarlo::{mc_distribution, SAMPLES_PER_STREAM};
