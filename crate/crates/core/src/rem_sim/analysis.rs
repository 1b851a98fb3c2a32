use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use statrs::function::factorial::ln_binomial;

use super::{simulate, DistanceClass, SimConfig, SimMode, SpectrumSample};
use crate::channel::{
    binary_entropy, gv_distance_bsc, mutual_information_uniform, OutputDistribution,
};
use crate::error::{Error, Result};
use crate::gibbs::GibbsFamily;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreeEnergySummary {
    pub mean: f64,
    pub stderr: f64,
    /// Sample standard deviation of the per-trial values.
    pub std_dev: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankSummary {
    pub ranks: Vec<u64>,
    pub median: f64,
    /// Mean of `ln(rank) / n`.
    pub mean_log_rank: f64,
    /// `R - I(X;Y)`, the predicted growth rate of the rank above capacity.
    pub reference: f64,
    pub trials: usize,
}

/// Frequency of `{N_y(d) ≥ 1}` for one distance below `n δ_Y(R)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PopulatedDistance {
    /// `d / n`.
    pub distance: f64,
    pub hamming: Option<usize>,
    pub hits: usize,
    pub frequency: f64,
    /// `ln Pr{N_y(d) ≥ 1}` from the exact binomial law (BSC only).
    pub log_prob_exact: Option<f64>,
    /// `-n [ln|X| - R - h_0(d/n)]`.
    pub log_rate_theory: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventReport {
    pub n: usize,
    pub rate: f64,
    pub epsilon: f64,
    pub trials: usize,
    /// Trials in which some distance is overpopulated (event B).
    pub b_hits: usize,
    pub pr_b: f64,
    /// `ln` of the double-exponential bound `e^{-e^{nε}}`.
    pub log_pr_b_theory: f64,
    pub populated: Vec<PopulatedDistance>,
}

fn need_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidConfig(
            "at least one trial is required".into(),
        ));
    }
    Ok(())
}

/// Mean and spread of `-ln Z_e / (nβ)` over `trials` codebooks.
pub fn empirical_free_energy(cfg: &SimConfig, trials: usize) -> Result<FreeEnergySummary> {
    need_trials(trials)?;
    free_energy_summary(&simulate(cfg, trials)?)
}

/// [`empirical_free_energy`] over samples that are already drawn.
pub fn free_energy_summary(samples: &[SpectrumSample]) -> Result<FreeEnergySummary> {
    need_trials(samples.len())?;
    let values: Vec<f64> = samples.iter().map(|s| s.f_empirical).collect();
    Ok(summarize(&values))
}

pub(crate) fn summarize(values: &[f64]) -> FreeEnergySummary {
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0)
    } else {
        0.0
    };
    FreeEnergySummary {
        mean,
        stderr: (var / k).sqrt(),
        std_dev: var.sqrt(),
        trials: values.len(),
    }
}

/// Likelihood rank of the transmitted codeword over `trials` codebooks.
pub fn rank_statistics(cfg: &SimConfig, trials: usize) -> Result<RankSummary> {
    need_trials(trials)?;
    rank_summary(cfg, &simulate(cfg, trials)?)
}

/// [`rank_statistics`] over samples drawn with `cfg`.
pub fn rank_summary(cfg: &SimConfig, samples: &[SpectrumSample]) -> Result<RankSummary> {
    need_trials(samples.len())?;
    let ranks = samples
        .iter()
        .map(|s| s.rank)
        .collect::<Option<Vec<u64>>>()
        .ok_or_else(|| Error::InvalidConfig("ranks need exact codeword counts".into()))?;
    let mut sorted = ranks.clone();
    sorted.sort_unstable();
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid] as f64
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid]) as f64
    };
    let n = cfg.n as f64;
    let mean_log_rank =
        ranks.iter().map(|&r| (r as f64).ln() / n).sum::<f64>() / ranks.len() as f64;
    Ok(RankSummary {
        median,
        mean_log_rank,
        reference: cfg.rate - mutual_information_uniform(&cfg.channel).mutual_information,
        trials: samples.len(),
        ranks,
    })
}

/// `ln Pr{N ≥ 1}` for `N ~ Bin(K, C(n,k) 2^{-n})` with `ln K = log_count`.
pub fn bsc_log_prob_populated(n: usize, k: usize, log_count: f64) -> f64 {
    let log_pi = ln_binomial(n as u64, k as u64) - n as f64 * std::f64::consts::LN_2;
    // λ = -K ln(1 - π) = -ln Pr{N = 0}, kept as ln λ so that tiny π survive
    let pi = log_pi.exp();
    let log_lambda = if pi < 1e-8 {
        log_count + log_pi + (0.5 * pi).ln_1p()
    } else {
        log_count + (-(-pi).ln_1p()).ln()
    };
    if log_lambda < -30.0 {
        // ln(1 - e^{-λ}) = ln λ - λ/2 + O(λ²)
        return log_lambda - 0.5 * log_lambda.exp();
    }
    (-(-log_lambda.exp()).exp_m1()).ln()
}

/// The generalized GV energy `h_0` evaluated at `delta`, clamped into the
/// achievable interval to absorb rounding in `d/n`.
fn h0_clamped(fam: &GibbsFamily, delta: f64) -> f64 {
    let (lo, hi) = fam.distortion_range();
    fam.h0(delta.clamp(lo, hi)).unwrap_or(f64::NAN)
}

struct Theory {
    ln_x: f64,
    is_bsc: bool,
}

impl Theory {
    fn h0(
        &self,
        sample: &SpectrumSample,
        cfg: &SimConfig,
        fam: Option<&GibbsFamily>,
        class: &DistanceClass,
        d: f64,
    ) -> f64 {
        match (class, fam) {
            (DistanceClass::Hamming(k), _) => {
                binary_entropy(*k as f64 / sample.n as f64).unwrap_or(0.0)
            }
            (_, Some(f)) => h0_clamped(f, d / cfg.n as f64),
            _ => f64::NAN,
        }
    }
}

/// Whether `sample` exhibits event B: some distance class with
/// `ln N_y(d) ≥ n [R - ln|X| + h_0(d/n | ŷ)]_+ + nε`.
pub fn event_b(cfg: &SimConfig, sample: &SpectrumSample, epsilon: f64) -> Result<bool> {
    let fam = match cfg.mode {
        SimMode::Enumerate => Some(GibbsFamily::new(
            &cfg.channel,
            &OutputDistribution::new(sample.output_type.clone())?,
        )?),
        SimMode::BscSpectrum => None,
    };
    let theory = Theory {
        ln_x: cfg.channel.log_input_size(),
        is_bsc: cfg.mode == SimMode::BscSpectrum,
    };
    Ok(overpopulated(cfg, sample, fam.as_ref(), &theory, epsilon))
}

fn overpopulated(
    cfg: &SimConfig,
    s: &SpectrumSample,
    fam: Option<&GibbsFamily>,
    theory: &Theory,
    epsilon: f64,
) -> bool {
    let n = cfg.n as f64;
    s.spectrum
        .iter()
        .filter(|b| b.distance.is_finite())
        .any(|b| {
            let h0 = theory.h0(s, cfg, fam, &b.class, b.distance);
            let threshold = n * (cfg.rate - theory.ln_x + h0).max(0.0) + n * epsilon;
            b.log_count >= threshold
        })
}

/// Empirical frequencies of event B and of `{N_y(d) ≥ 1}` below
/// `n δ_Y(R)`, next to their predicted decay rates.
pub fn event_probabilities(cfg: &SimConfig, epsilon: f64, trials: usize) -> Result<EventReport> {
    need_trials(trials)?;
    check_epsilon(epsilon)?;
    event_report(cfg, &simulate(cfg, trials)?, epsilon)
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    Ok(())
}

/// [`event_probabilities`] over samples drawn with `cfg`.
pub fn event_report(
    cfg: &SimConfig,
    samples: &[SpectrumSample],
    epsilon: f64,
) -> Result<EventReport> {
    need_trials(samples.len())?;
    check_epsilon(epsilon)?;
    let trials = samples.len();
    let theory = Theory {
        ln_x: cfg.channel.log_input_size(),
        is_bsc: cfg.mode == SimMode::BscSpectrum,
    };
    let n = cfg.n as f64;

    let families: Vec<Option<GibbsFamily>> = samples
        .par_iter()
        .map(|s| match cfg.mode {
            SimMode::Enumerate => OutputDistribution::new(s.output_type.clone())
                .and_then(|q| GibbsFamily::new(&cfg.channel, &q))
                .map(Some),
            SimMode::BscSpectrum => Ok(None),
        })
        .collect::<Result<_>>()?;

    let b_hits = samples
        .par_iter()
        .zip(&families)
        .filter(|(s, f)| overpopulated(cfg, s, f.as_ref(), &theory, epsilon))
        .count();

    let populated = if theory.is_bsc {
        bsc_populated(cfg, samples)
    } else {
        enumerated_populated(cfg, samples, &families)?
    };

    Ok(EventReport {
        n: cfg.n,
        rate: cfg.rate,
        epsilon,
        trials,
        b_hits,
        pr_b: b_hits as f64 / trials as f64,
        log_pr_b_theory: -(n * epsilon).exp(),
        populated,
    })
}

fn bsc_populated(cfg: &SimConfig, samples: &[SpectrumSample]) -> Vec<PopulatedDistance> {
    let n = cfg.n;
    let gv = gv_distance_bsc(cfg.rate).unwrap_or(0.0);
    let log_others = cfg.others().ln();
    (0..=n)
        .take_while(|&k| (k as f64) < gv * n as f64)
        .map(|k| {
            let hits = samples
                .iter()
                .filter(|s| {
                    s.spectrum
                        .iter()
                        .any(|b| b.class == DistanceClass::Hamming(k))
                })
                .count();
            let delta = k as f64 / n as f64;
            let h = binary_entropy(delta).unwrap_or(0.0);
            PopulatedDistance {
                distance: delta,
                hamming: Some(k),
                hits,
                frequency: hits as f64 / samples.len() as f64,
                log_prob_exact: Some(bsc_log_prob_populated(n, k, log_others)),
                log_rate_theory: -(n as f64) * (std::f64::consts::LN_2 - cfg.rate - h),
            }
        })
        .collect()
}

fn enumerated_populated(
    cfg: &SimConfig,
    samples: &[SpectrumSample],
    families: &[Option<GibbsFamily>],
) -> Result<Vec<PopulatedDistance>> {
    let n = cfg.n as f64;
    let reference = GibbsFamily::new(&cfg.channel, &cfg.channel.output_marginal())?;
    // distances are keyed on a 1e-9 grid of d/n
    let key = |d: f64| (d / n * 1e9).round() as i64;
    let mut hits: BTreeMap<i64, (f64, usize)> = BTreeMap::new();
    for (s, fam) in samples.iter().zip(families) {
        let Some(fam) = fam else { continue };
        let Ok(cutoff) = fam.delta_y(cfg.rate.min(fam.log_input_size())) else {
            continue;
        };
        let mut seen: Vec<i64> = s
            .spectrum
            .iter()
            .filter(|b| b.distance.is_finite() && b.distance / n < cutoff)
            .map(|b| key(b.distance))
            .collect();
        seen.sort_unstable();
        seen.dedup();
        for k in seen {
            hits.entry(k).or_insert((k as f64 * 1e-9, 0)).1 += 1;
        }
    }
    let ln_x = cfg.channel.log_input_size();
    Ok(hits
        .into_values()
        .map(|(delta, count)| PopulatedDistance {
            distance: delta,
            hamming: None,
            hits: count,
            frequency: count as f64 / samples.len() as f64,
            log_prob_exact: None,
            log_rate_theory: -n * (ln_x - cfg.rate - h0_clamped(&reference, delta)),
        })
        .collect())
}
