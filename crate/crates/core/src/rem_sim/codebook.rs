use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::numeric::log_sum_exp;

/// An explicit list of codewords over the input alphabet `0..|X|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Codebook {
    n: usize,
    words: Vec<Vec<usize>>,
}

impl Codebook {
    pub fn new(words: Vec<Vec<usize>>, input_size: usize) -> Result<Self> {
        let n = words.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::InvalidConfig(
                "codebook needs at least one nonempty codeword".into(),
            ));
        }
        for (i, w) in words.iter().enumerate() {
            if w.len() != n {
                return Err(Error::InvalidConfig(format!(
                    "codeword {i} has length {}, expected {n}",
                    w.len()
                )));
            }
            if let Some(&s) = w.iter().find(|&&s| s >= input_size) {
                return Err(Error::InvalidConfig(format!(
                    "codeword {i} uses symbol {s} outside 0..{input_size}"
                )));
            }
        }
        Ok(Self { n, words })
    }

    /// `m` codewords with i.i.d. uniform symbols.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize, input_size: usize) -> Self {
        let words = (0..m)
            .map(|_| (0..n).map(|_| rng.random_range(0..input_size)).collect())
            .collect();
        Self { n, words }
    }

    pub fn block_length(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }
}

/// Passes `x` through the channel symbol by symbol.
pub fn transmit<R: Rng + ?Sized>(ch: &Channel, x: &[usize], rng: &mut R) -> Vec<usize> {
    let rows: Vec<WeightedIndex<f64>> = ch
        .rows()
        .iter()
        .map(|r| WeightedIndex::new(r).expect("channel rows are distributions"))
        .collect();
    x.iter().map(|&s| rows[s].sample(rng)).collect()
}

/// `P_β(x_ℓ = a | y)` for every input symbol `a`, where
/// `P_β(x|y) ∝ P(y|x)^β` over the codebook and `position` is 1-based.
pub fn symbolwise_marginal(
    ch: &Channel,
    codebook: &Codebook,
    y: &[usize],
    beta: f64,
    position: usize,
) -> Result<Vec<f64>> {
    let n = codebook.block_length();
    if y.len() != n {
        return Err(Error::InvalidConfig(format!(
            "received word has length {}, expected {n}",
            y.len()
        )));
    }
    if let Some(&s) = y.iter().find(|&&s| s >= ch.output_size()) {
        return Err(Error::InvalidConfig(format!(
            "received symbol {s} outside the output alphabet"
        )));
    }
    if !(1..=n).contains(&position) {
        return Err(Error::OutOfRange {
            what: "position",
            value: position as f64,
            lo: 1.0,
            hi: n as f64,
        });
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::OutOfRange {
            what: "beta",
            value: beta,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    if codebook
        .words()
        .iter()
        .any(|w| w.iter().any(|&s| s >= ch.input_size()))
    {
        return Err(Error::InvalidConfig(
            "codebook uses symbols outside the input alphabet".into(),
        ));
    }
    let log_weights: Vec<f64> = codebook
        .words()
        .iter()
        .map(|w| {
            w.iter()
                .zip(y)
                .map(|(&x, &s)| beta * ch.prob(x, s).ln())
                .sum()
        })
        .collect();
    let log_z = log_sum_exp(&log_weights);
    if log_z == f64::NEG_INFINITY {
        return Err(Error::EmptySupport);
    }
    let mut marginal = vec![0.0; ch.input_size()];
    for (w, lw) in codebook.words().iter().zip(&log_weights) {
        marginal[w[position - 1]] += (lw - log_z).exp();
    }
    Ok(marginal)
}
