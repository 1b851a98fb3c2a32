//! Monte Carlo random codebooks.
//!
//! Each trial draws a transmitted word `x0`, passes it through the channel
//! and records the distance spectrum `N_y(d)` of the other codewords, from
//! which the partition functions `Z_c`, `Z_e`, `Z` and the empirical free
//! energy follow. Two samplers are available: explicit enumeration of the
//! codebook for any DMC (small `n`), and direct sampling of the Hamming
//! spectrum for the BSC (large `n`, counts kept in the log domain).
//!
//! Trial `t` uses ChaCha stream `t` of the configured seed, so results do
//! not depend on how trials are scheduled across threads.

mod analysis;
mod codebook;
mod spectrum;

pub use analysis::{
    bsc_log_prob_populated, empirical_free_energy, event_b, event_probabilities, event_report,
    free_energy_summary, rank_statistics, rank_summary, EventReport, FreeEnergySummary,
    PopulatedDistance, RankSummary,
};
pub use codebook::{symbolwise_marginal, transmit, Codebook};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::numeric::{log_add_exp, log_sum_exp};

/// `ln 2^26`, the enumeration budget `|X|^n · M`.
pub const WORK_BOUND_LOG: f64 = 26.0 * std::f64::consts::LN_2;
/// Counts below `2^53` are tracked exactly.
const EXACT_LIMIT_LOG: f64 = 53.0 * std::f64::consts::LN_2;
const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    Enumerate,
    BscSpectrum,
}

impl std::str::FromStr for SimMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "enumerate" => Ok(SimMode::Enumerate),
            "bsc-spectrum" | "bsc_spectrum" => Ok(SimMode::BscSpectrum),
            other => Err(format!(
                "unknown mode '{other}' (expected enumerate or bsc-spectrum)"
            )),
        }
    }
}

impl std::fmt::Display for SimMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SimMode::Enumerate => "enumerate",
            SimMode::BscSpectrum => "bsc-spectrum",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub n: usize,
    pub rate: f64,
    pub beta: f64,
    pub channel: Channel,
    pub trials: usize,
    pub seed: u64,
    pub mode: SimMode,
    /// Draw `M` random codewords besides `x0` instead of `M - 1`.
    pub include_correct: bool,
}

impl SimConfig {
    pub fn new(channel: Channel, n: usize, rate: f64, beta: f64, mode: SimMode) -> Self {
        Self {
            n,
            rate,
            beta,
            channel,
            trials: 1,
            seed: 0,
            mode,
            include_correct: false,
        }
    }

    /// `ln M` with `M = round(e^{nR})`.
    pub fn log_m(&self) -> f64 {
        match self.m_exact() {
            Some(m) => (m as f64).ln(),
            None => self.n as f64 * self.rate,
        }
    }

    /// `M` when it is below `2^53`.
    pub fn m_exact(&self) -> Option<u64> {
        let nr = self.n as f64 * self.rate;
        (nr < EXACT_LIMIT_LOG).then(|| nr.exp().round() as u64)
    }

    /// Number of random codewords other than `x0`, exact or as a logarithm.
    fn others(&self) -> Count {
        let extra = u64::from(self.include_correct);
        match self.m_exact() {
            Some(m) => Count::Exact(m - 1 + extra),
            None if self.include_correct => Count::Log(self.log_m()),
            None => Count::Log(self.log_m() + (-(-self.log_m()).exp()).ln_1p()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("block length must be positive".into()));
        }
        if !(self.rate > 0.0 && self.rate.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "rate must be positive, got {}",
                self.rate
            )));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "beta must be positive, got {}",
                self.beta
            )));
        }
        if self.m_exact().is_some_and(|m| m < 2) {
            return Err(Error::InvalidConfig(format!(
                "M = round(e^(nR)) = {} is below 2",
                self.m_exact().unwrap_or(0)
            )));
        }
        match self.mode {
            SimMode::Enumerate => {
                let work = self.n as f64 * self.channel.log_input_size() + self.log_m();
                if work > WORK_BOUND_LOG {
                    return Err(Error::WorkBound(format!(
                        "|X|^n * M = e^{work:.3} exceeds 2^26 (n = {}, R = {})",
                        self.n, self.rate
                    )));
                }
            }
            SimMode::BscSpectrum => {
                if self.channel.bsc_crossover().is_none() {
                    return Err(Error::InvalidConfig(
                        "bsc-spectrum mode requires a binary symmetric channel".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// A codeword count that is either exact or known only through its logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Count {
    Exact(u64),
    Log(f64),
}

impl Count {
    fn ln(self) -> f64 {
        match self {
            Count::Exact(0) => f64::NEG_INFINITY,
            Count::Exact(k) => (k as f64).ln(),
            Count::Log(l) => l,
        }
    }

    fn exact(self) -> Option<u64> {
        match self {
            Count::Exact(k) => Some(k),
            Count::Log(_) => None,
        }
    }
}

/// Key of a spectrum bin: the joint type of `(x, y)` for enumeration, the
/// Hamming distance for the BSC sampler.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceClass {
    /// Counts `n(x, y)` flattened row-major over `(x, y)`.
    JointType(Vec<u32>),
    Hamming(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumBin {
    pub class: DistanceClass,
    /// `d = -ln P(y|x)` for every codeword in the bin.
    pub distance: f64,
    pub log_count: f64,
    /// The count itself when it is below `2^53`.
    pub count: Option<u64>,
}

/// One random codebook draw.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSample {
    pub trial: u64,
    pub n: usize,
    /// Distance spectrum of the incorrect codewords, sorted by class.
    pub spectrum: Vec<SpectrumBin>,
    /// Empirical distribution of the received word.
    pub output_type: Vec<f64>,
    /// `d(x0, y)`.
    pub d_correct: f64,
    /// `ln Z_c = -β d(x0, y)`.
    pub z_correct: f64,
    /// `ln Z_e`.
    pub z_error: f64,
    /// `ln Z = ln(Z_c + Z_e)`.
    pub z_total: f64,
    /// `-ln Z_e / (nβ)`.
    pub f_empirical: f64,
    /// Position of `x0` in decreasing likelihood, ties broken uniformly.
    /// Absent when the counts ahead of it are not exact.
    pub rank: Option<u64>,
}

impl SpectrumSample {
    /// Total number of incorrect codewords, in the log domain.
    pub fn log_total(&self) -> f64 {
        log_sum_exp(
            &self
                .spectrum
                .iter()
                .map(|b| b.log_count)
                .collect::<Vec<_>>(),
        )
    }

    /// Smallest `d` whose cumulative count reaches the fraction `level` of
    /// all incorrect codewords.
    pub fn distance_quantile(&self, level: f64) -> f64 {
        let mut bins: Vec<&SpectrumBin> = self
            .spectrum
            .iter()
            .filter(|b| b.log_count > f64::NEG_INFINITY)
            .collect();
        bins.sort_by(|a, b| a.distance.total_cmp(&b.distance));
        let Some(last) = bins.last() else {
            return f64::NAN;
        };
        if level <= 0.0 {
            return bins[0].distance;
        }
        let target = self.log_total() + level.ln();
        let mut acc = f64::NEG_INFINITY;
        for b in &bins {
            acc = log_add_exp(acc, b.log_count);
            if acc >= target - 1e-12 {
                return b.distance;
            }
        }
        last.distance
    }
}

/// The RNG of trial `trial`: ChaCha8 seeded with `seed`, stream `trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn is_tie(d: f64, d0: f64) -> bool {
    d == d0 || (d - d0).abs() <= TIE_TOL * d0.abs().max(1.0)
}

fn finish(
    cfg: &SimConfig,
    trial: u64,
    mut spectrum: Vec<SpectrumBin>,
    output_type: Vec<f64>,
    d_correct: f64,
    rng: &mut ChaCha8Rng,
) -> SpectrumSample {
    use rand::Rng;

    spectrum.sort_by(|a, b| a.class.cmp(&b.class));
    let beta = cfg.beta;
    let z_correct = -beta * d_correct;
    let terms: Vec<f64> = spectrum
        .iter()
        .map(|b| {
            if b.distance.is_infinite() {
                f64::NEG_INFINITY
            } else {
                b.log_count - beta * b.distance
            }
        })
        .collect();
    let z_error = log_sum_exp(&terms);
    let z_total = log_add_exp(z_correct, z_error);

    let mut ahead: Option<u64> = Some(0);
    let mut ties: Option<u64> = Some(0);
    for b in &spectrum {
        let slot = if is_tie(b.distance, d_correct) {
            &mut ties
        } else if b.distance < d_correct {
            &mut ahead
        } else {
            continue;
        };
        *slot = match (*slot, b.count) {
            (Some(a), Some(c)) => a.checked_add(c),
            _ => None,
        };
    }
    let rank = match (ahead, ties) {
        (Some(a), Some(t)) => Some(1 + a + rng.random_range(0..=t)),
        _ => None,
    };

    SpectrumSample {
        trial,
        n: cfg.n,
        spectrum,
        output_type,
        d_correct,
        z_correct,
        z_error,
        z_total,
        f_empirical: -z_error / (cfg.n as f64 * beta),
        rank,
    }
}

/// Draws the codebook of trial `trial` and returns its spectrum.
pub fn sample_spectrum(cfg: &SimConfig, trial: u64) -> Result<SpectrumSample> {
    cfg.validate()?;
    let mut rng = trial_rng(cfg.seed, trial);
    let (bins, output_type, d0) = match cfg.mode {
        SimMode::Enumerate => spectrum::enumerate(cfg, &mut rng),
        SimMode::BscSpectrum => spectrum::BscTables::new(cfg).sample(cfg, &mut rng),
    };
    Ok(finish(cfg, trial, bins, output_type, d0, &mut rng))
}

/// Runs trials `0..trials` in parallel, returned in trial order.
pub fn simulate(cfg: &SimConfig, trials: usize) -> Result<Vec<SpectrumSample>> {
    cfg.validate()?;
    let tables = match cfg.mode {
        SimMode::BscSpectrum => Some(spectrum::BscTables::new(cfg)),
        SimMode::Enumerate => None,
    };
    Ok((0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let (bins, output_type, d0) = match &tables {
                Some(tab) => tab.sample(cfg, &mut rng),
                None => spectrum::enumerate(cfg, &mut rng),
            };
            finish(cfg, t, bins, output_type, d0, &mut rng)
        })
        .collect())
}
