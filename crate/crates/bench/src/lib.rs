//! Fixture channels shared by the benchmarks.

use remcode::{Channel, OutputDistribution, SimConfig, SimMode};

pub fn bsc() -> Channel {
    Channel::bsc(0.1).expect("valid crossover")
}

/// A 4-input, 5-output channel with no symmetry.
pub fn skewed() -> Channel {
    Channel::new(vec![
        vec![0.55, 0.2, 0.1, 0.1, 0.05],
        vec![0.1, 0.5, 0.2, 0.1, 0.1],
        vec![0.05, 0.15, 0.6, 0.1, 0.1],
        vec![0.2, 0.1, 0.1, 0.3, 0.3],
    ])
    .expect("rows are distributions")
}

pub fn marginal(ch: &Channel) -> OutputDistribution {
    ch.output_marginal()
}

/// Rate halfway between the uniform-input mutual information and `ln|X|`.
pub fn rate_above_capacity(ch: &Channel) -> f64 {
    let i = remcode::mutual_information_uniform(ch).mutual_information;
    0.5 * (i + ch.log_input_size())
}

pub fn bsc_spectrum(n: usize) -> SimConfig {
    SimConfig::new(bsc(), n, 0.3, 2.0, SimMode::BscSpectrum)
}

pub fn enumerate_small() -> SimConfig {
    SimConfig::new(skewed(), 8, 0.4, 1.5, SimMode::Enumerate)
}
