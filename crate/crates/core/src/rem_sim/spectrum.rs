use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson, StandardNormal};
use statrs::function::factorial::ln_binomial;

use super::{Count, DistanceClass, SimConfig, SpectrumBin, EXACT_LIMIT_LOG};
use crate::channel::distortion;
use crate::numeric::{log_add_exp, weighted};

/// Largest Poisson mean used for the spectrum of a huge codebook; beyond it
/// the normal approximation is used.
const POISSON_LIMIT: f64 = 1e7;

type Sampled = (Vec<SpectrumBin>, Vec<f64>, f64);

/// Explicit codebook: every incorrect codeword is drawn and binned by the
/// joint type it forms with `y`.
pub(super) fn enumerate(cfg: &SimConfig, rng: &mut ChaCha8Rng) -> Sampled {
    let ch = &cfg.channel;
    let (nx, ny) = (ch.input_size(), ch.output_size());
    let d = distortion(ch);
    let x0: Vec<usize> = (0..cfg.n).map(|_| rng.random_range(0..nx)).collect();
    let y = super::codebook::transmit(ch, &x0, rng);

    let type_distance = |counts: &[u32]| -> f64 {
        let mut total = 0.0;
        for x in 0..nx {
            for yy in 0..ny {
                total += weighted(counts[x * ny + yy] as f64, d[x][yy]);
            }
        }
        total
    };
    let joint = |word: &[usize]| -> Vec<u32> {
        let mut counts = vec![0u32; nx * ny];
        for (&x, &yy) in word.iter().zip(&y) {
            counts[x * ny + yy] += 1;
        }
        counts
    };

    let d0 = type_distance(&joint(&x0));
    let others = cfg
        .others()
        .exact()
        .expect("enumeration needs an exact codebook size");
    let mut bins: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    let mut word = vec![0usize; cfg.n];
    for _ in 0..others {
        word.iter_mut().for_each(|x| *x = rng.random_range(0..nx));
        *bins.entry(joint(&word)).or_insert(0) += 1;
    }
    let spectrum = bins
        .into_iter()
        .map(|(key, c)| SpectrumBin {
            distance: type_distance(&key),
            class: DistanceClass::JointType(key),
            log_count: (c as f64).ln(),
            count: Some(c),
        })
        .collect();

    let mut output_type = vec![0.0; ny];
    y.iter().for_each(|&s| output_type[s] += 1.0 / cfg.n as f64);
    (spectrum, output_type, d0)
}

/// Per-configuration tables of the Hamming spectrum of a uniform codeword.
pub(super) struct BscTables {
    p: f64,
    /// `ln π_k = ln C(n,k) - n ln 2`.
    log_pi: Vec<f64>,
    /// `ln S_k = ln Σ_{j ≥ k} π_j`, with `S_{n+1} = 0`.
    log_tail: Vec<f64>,
    distance: Vec<f64>,
}

impl BscTables {
    pub(super) fn new(cfg: &SimConfig) -> Self {
        let n = cfg.n;
        let p = cfg.channel.bsc_crossover().expect("validated BSC");
        let ln2n = n as f64 * std::f64::consts::LN_2;
        let log_pi: Vec<f64> = (0..=n)
            .map(|k| ln_binomial(n as u64, k as u64) - ln2n)
            .collect();
        let mut log_tail = vec![f64::NEG_INFINITY; n + 2];
        for k in (0..=n).rev() {
            log_tail[k] = log_add_exp(log_tail[k + 1], log_pi[k]);
        }
        let (flip, keep) = (-p.ln(), -(-p).ln_1p());
        let distance = (0..=n)
            .map(|k| weighted(k as f64, flip) + weighted((n - k) as f64, keep))
            .collect();
        Self {
            p,
            log_pi,
            log_tail,
            distance,
        }
    }

    /// The multinomial spectrum as a chain of conditional binomials
    /// `N_k ~ Bin(remaining, π_k / S_k)`.
    pub(super) fn sample(&self, cfg: &SimConfig, rng: &mut ChaCha8Rng) -> Sampled {
        let n = cfg.n;
        let flips = Binomial::new(n as u64, self.p)
            .expect("valid crossover")
            .sample(rng) as usize;
        let mut remaining = cfg.others();
        let mut spectrum = Vec::new();
        for k in 0..=n {
            if remaining == Count::Exact(0) {
                break;
            }
            let log_p = self.log_pi[k] - self.log_tail[k];
            let log_q = self.log_tail[k + 1] - self.log_tail[k];
            let (drawn, rest) = if k == n {
                (remaining, Count::Exact(0))
            } else {
                split(remaining, log_p, log_q, rng)
            };
            remaining = rest;
            if drawn.ln() > f64::NEG_INFINITY {
                spectrum.push(SpectrumBin {
                    class: DistanceClass::Hamming(k),
                    distance: self.distance[k],
                    log_count: drawn.ln(),
                    count: drawn.exact(),
                });
            }
        }
        (spectrum, vec![0.5, 0.5], self.distance[flips])
    }
}

/// Splits `total` into `Bin(total, p)` and the remainder, where
/// `ln p = log_p` and `ln(1-p) = log_q`.
fn split(total: Count, log_p: f64, log_q: f64, rng: &mut ChaCha8Rng) -> (Count, Count) {
    match total {
        Count::Exact(k) => {
            let p = log_p.exp().min(1.0);
            let drawn = Binomial::new(k, p)
                .expect("probability in [0,1]")
                .sample(rng);
            (Count::Exact(drawn), Count::Exact(k - drawn))
        }
        Count::Log(lk) => {
            let (log_mean, log_rest) = (lk + log_p, lk + log_q);
            if log_mean < POISSON_LIMIT.ln() {
                let drawn = poisson(log_mean.exp(), rng);
                (Count::Exact(drawn), shrink(lk, drawn))
            } else if log_rest < POISSON_LIMIT.ln() {
                let left = poisson(log_rest.exp(), rng);
                (shrink(lk, left), Count::Exact(left))
            } else {
                // relative fluctuations are below 1e-3 here
                let z: f64 = StandardNormal.sample(rng);
                let drawn = log_mean + ((log_q - log_mean).exp().sqrt() * z).ln_1p();
                let rest = log_rest + (-(log_p - log_rest).exp().sqrt() * z).ln_1p();
                (settle(drawn), settle(rest))
            }
        }
    }
}

fn poisson(mean: f64, rng: &mut ChaCha8Rng) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean)
        .expect("finite positive mean")
        .sample(rng) as u64
}

/// `ln(e^{lk} - k)` for an exact `k`, as a count.
fn shrink(lk: f64, k: u64) -> Count {
    if k == 0 {
        return Count::Log(lk);
    }
    settle(lk + (-((k as f64).ln() - lk).exp()).ln_1p())
}

/// Converts a log count to an exact one once it is small enough.
fn settle(log_count: f64) -> Count {
    if log_count < EXACT_LIMIT_LOG {
        Count::Exact(log_count.exp().round() as u64)
    } else {
        Count::Log(log_count)
    }
}
