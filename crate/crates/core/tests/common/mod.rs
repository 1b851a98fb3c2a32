#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use remcode::{Channel, OutputDistribution};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A channel with strictly positive entries and the given alphabet sizes.
pub fn random_channel(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> Channel {
    let rows = (0..nx)
        .map(|_| {
            let raw: Vec<f64> = (0..ny).map(|_| 0.05 + rng.random::<f64>()).collect();
            let s: f64 = raw.iter().sum();
            raw.into_iter().map(|v| v / s).collect()
        })
        .collect();
    Channel::new(rows).unwrap()
}

/// Alphabet sizes drawn from `2..=4`.
pub fn random_small_channel(rng: &mut ChaCha8Rng) -> Channel {
    let nx = rng.random_range(2..=4);
    let ny = rng.random_range(2..=4);
    random_channel(rng, nx, ny)
}

pub fn random_distribution(rng: &mut ChaCha8Rng, size: usize) -> OutputDistribution {
    let raw: Vec<f64> = (0..size).map(|_| 0.05 + rng.random::<f64>()).collect();
    let s: f64 = raw.iter().sum();
    OutputDistribution::new(raw.into_iter().map(|v| v / s).collect()).unwrap()
}

/// Golden-section minimum of a unimodal function on `[a, b]`.
pub fn golden_min(mut a: f64, mut b: f64, iters: usize, f: impl Fn(f64) -> f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    fc.min(fd)
}

/// `Σ_y q(y) ln Σ_x p(y|x)^s`, written out directly.
pub fn tilted_log_partition(ch: &Channel, q: &[f64], s: f64) -> f64 {
    (0..ch.output_size())
        .filter(|&y| q[y] > 0.0)
        .map(|y| {
            let logs: Vec<f64> = (0..ch.input_size())
                .map(|x| ch.prob(x, y))
                .filter(|&p| p > 0.0)
                .map(|p| s * p.ln())
                .collect();
            let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let z: f64 = logs.iter().map(|l| (l - top).exp()).sum();
            q[y] * (top + z.ln())
        })
        .sum()
}

pub fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.ln() - (1.0 - p) * (1.0 - p).ln()
    }
}
