//! Discrete memoryless channels, the distributions that live on their
//! alphabets, and the binary-alphabet special functions used by the BSC
//! closed forms.
//!
//! All information quantities are in nats.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::numeric::{bisect_first_true, entropy, weighted};

/// Tolerance on row sums accepted at construction. Rows within this of 1 are
/// renormalized; anything further off is rejected.
pub const PROB_TOL: f64 = 1e-9;

/// A finite-alphabet DMC `p(y|x)`, rows over `x`, columns over `y`.
///
/// Coding is always over the uniform input distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Channel {
    input_size: usize,
    output_size: usize,
    p: Vec<Vec<f64>>,
}

impl Channel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let input_size = rows.len();
        if input_size < 2 {
            return Err(Error::InvalidChannel(format!(
                "input alphabet must have at least 2 symbols, got {input_size}"
            )));
        }
        let output_size = rows[0].len();
        if output_size < 2 {
            return Err(Error::InvalidChannel(format!(
                "output alphabet must have at least 2 symbols, got {output_size}"
            )));
        }
        let mut p = Vec::with_capacity(input_size);
        for (x, row) in rows.into_iter().enumerate() {
            if row.len() != output_size {
                return Err(Error::ChannelFile {
                    row: Some(x),
                    col: None,
                    message: format!("expected {output_size} entries, found {}", row.len()),
                });
            }
            for (y, &v) in row.iter().enumerate() {
                if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                    return Err(Error::ChannelFile {
                        row: Some(x),
                        col: Some(y),
                        message: format!("transition probability {v} outside [0, 1]"),
                    });
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > PROB_TOL {
                return Err(Error::ChannelFile {
                    row: Some(x),
                    col: None,
                    message: format!("row sums to {sum}, not 1"),
                });
            }
            p.push(row.iter().map(|v| v / sum).collect());
        }
        Ok(Self {
            input_size,
            output_size,
            p,
        })
    }

    /// Binary symmetric channel with crossover probability `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange {
                what: "crossover probability",
                value: p,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Self::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
    }

    pub fn input_size(&self) -> usize {
        self.input_size
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    #[inline]
    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.p[x][y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.p[x]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.p
    }

    /// `ln |X|`.
    pub fn log_input_size(&self) -> f64 {
        (self.input_size as f64).ln()
    }

    /// The crossover probability if this is a 2x2 symmetric channel.
    pub fn bsc_crossover(&self) -> Option<f64> {
        if self.input_size != 2 || self.output_size != 2 {
            return None;
        }
        let p = self.p[0][1];
        ((self.p[1][0] - p).abs() <= 1e-12).then_some(p)
    }

    /// Whether some input reaches `y` with positive probability.
    pub fn is_reachable(&self, y: usize) -> bool {
        self.p.iter().any(|row| row[y] > 0.0)
    }

    /// Output law under the uniform input distribution.
    pub fn output_marginal(&self) -> OutputDistribution {
        let k = self.input_size as f64;
        let q = (0..self.output_size)
            .map(|y| self.p.iter().map(|row| row[y]).sum::<f64>() / k)
            .collect();
        OutputDistribution { q }
    }

    /// Parse the JSON channel-file format: either
    /// `{"input_size": n, "output_size": m, "p": [[...], ...]}` or
    /// `{"bsc": {"p": value}}`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::ChannelFile {
            row: None,
            col: None,
            message: format!(
                "malformed JSON at line {}, column {}: {e}",
                e.line(),
                e.column()
            ),
        })?;
        Self::from_json_value(&value)
    }

    pub fn from_json_value(value: &Value) -> Result<Self> {
        let file_err = |row, col, message: String| Error::ChannelFile { row, col, message };
        let obj = value
            .as_object()
            .ok_or_else(|| file_err(None, None, "top level must be a JSON object".into()))?;

        if let Some(bsc) = obj.get("bsc") {
            let p = bsc
                .get("p")
                .and_then(Value::as_f64)
                .ok_or_else(|| file_err(None, None, "\"bsc\" needs a numeric \"p\"".into()))?;
            return Self::bsc(p).map_err(|e| file_err(None, None, e.to_string()));
        }

        let size = |key: &str| -> Result<Option<usize>> {
            match obj.get(key) {
                None => Ok(None),
                Some(v) => v.as_u64().map(|n| Some(n as usize)).ok_or_else(|| {
                    file_err(
                        None,
                        None,
                        format!("\"{key}\" must be a non-negative integer"),
                    )
                }),
            }
        };
        let input_size = size("input_size")?;
        let output_size = size("output_size")?;

        let rows = obj.get("p").and_then(Value::as_array).ok_or_else(|| {
            file_err(
                None,
                None,
                "missing \"p\" matrix (or \"bsc\" shorthand)".into(),
            )
        })?;
        if let Some(n) = input_size {
            if rows.len() != n {
                return Err(file_err(
                    None,
                    None,
                    format!("input_size is {n} but \"p\" has {} rows", rows.len()),
                ));
            }
        }
        let mut matrix = Vec::with_capacity(rows.len());
        for (x, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| file_err(Some(x), None, "row is not an array".into()))?;
            if let Some(m) = output_size {
                if row.len() != m {
                    return Err(file_err(
                        Some(x),
                        None,
                        format!("output_size is {m} but row has {} entries", row.len()),
                    ));
                }
            }
            let mut parsed = Vec::with_capacity(row.len());
            for (y, v) in row.iter().enumerate() {
                let v = v.as_f64().ok_or_else(|| {
                    file_err(Some(x), Some(y), format!("entry {v} is not a number"))
                })?;
                parsed.push(v);
            }
            matrix.push(parsed);
        }
        Self::new(matrix)
    }
}

impl<'de> Deserialize<'de> for Channel {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        Channel::from_json_value(&value).map_err(serde::de::Error::custom)
    }
}

/// A probability vector over the output alphabet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDistribution {
    q: Vec<f64>,
}

impl OutputDistribution {
    pub fn new(q: Vec<f64>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidDistribution(
                "empty probability vector".into(),
            ));
        }
        if let Some((i, v)) = q
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidDistribution(format!("entry {i} is {v}")));
        }
        let sum: f64 = q.iter().sum();
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidDistribution(format!("sums to {sum}, not 1")));
        }
        Ok(Self {
            q: q.into_iter().map(|v| v / sum).collect(),
        })
    }

    pub(crate) fn from_vec_unchecked(q: Vec<f64>) -> Self {
        Self { q }
    }

    pub fn uniform(size: usize) -> Self {
        Self {
            q: vec![1.0 / size as f64; size],
        }
    }

    /// Empirical distribution of a received word.
    pub fn empirical(symbols: &[usize], size: usize) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidDistribution("empty sequence".into()));
        }
        let mut q = vec![0.0; size];
        for &s in symbols {
            if s >= size {
                return Err(Error::InvalidDistribution(format!(
                    "symbol {s} outside alphabet of size {size}"
                )));
            }
            q[s] += 1.0;
        }
        let n = symbols.len() as f64;
        q.iter_mut().for_each(|v| *v /= n);
        Ok(Self { q })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn entropy(&self) -> f64 {
        entropy(&self.q)
    }
}

impl std::ops::Index<usize> for OutputDistribution {
    type Output = f64;
    fn index(&self, y: usize) -> &f64 {
        &self.q[y]
    }
}

/// A conditional law `Q(x|y)`, stored per output symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalDistribution {
    columns: Vec<Vec<f64>>,
}

impl ConditionalDistribution {
    pub fn new(columns: Vec<Vec<f64>>) -> Result<Self> {
        for (y, col) in columns.iter().enumerate() {
            let sum: f64 = col.iter().sum();
            if col.iter().any(|v| !v.is_finite() || *v < 0.0) || (sum - 1.0).abs() > PROB_TOL {
                return Err(Error::InvalidDistribution(format!(
                    "Q(.|y={y}) is not a probability vector (sum {sum})"
                )));
            }
        }
        Ok(Self { columns })
    }

    pub(crate) fn from_columns_unchecked(columns: Vec<Vec<f64>>) -> Self {
        Self { columns }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.columns[y][x]
    }

    /// `Q(.|y)`.
    pub fn column(&self, y: usize) -> &[f64] {
        &self.columns[y]
    }

    /// `H_Q(X|Y)` under the output law `q`.
    pub fn conditional_entropy(&self, q: &OutputDistribution) -> f64 {
        self.columns
            .iter()
            .zip(q.as_slice())
            .map(|(col, &w)| weighted(w, entropy(col)))
            .sum()
    }
}

/// `d(x,y) = -ln p(y|x)`, indexed `[x][y]`. Impossible transitions map to `+inf`.
pub fn distortion(ch: &Channel) -> Vec<Vec<f64>> {
    ch.rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|&p| if p > 0.0 { -p.ln() } else { f64::INFINITY })
                .collect()
        })
        .collect()
}

/// Binary entropy `h(δ)` in nats.
pub fn binary_entropy(delta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::OutOfRange {
            what: "delta",
            value: delta,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(entropy(&[delta, 1.0 - delta]))
}

/// Binary divergence `D(a‖b)` in nats. Returns `+inf` when `b ∈ {0,1}` and
/// `a` puts mass where `b` does not.
pub fn binary_divergence(a: f64, b: f64) -> Result<f64> {
    for (what, v) in [("a", a), ("b", b)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange {
                what,
                value: v,
                lo: 0.0,
                hi: 1.0,
            });
        }
    }
    let term = |u: f64, v: f64| -> f64 {
        if u == 0.0 {
            0.0
        } else if v == 0.0 {
            f64::INFINITY
        } else {
            u * (u / v).ln()
        }
    };
    Ok(term(a, b) + term(1.0 - a, 1.0 - b))
}

/// Entropies of the joint law induced by a uniform input and the channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfoMeasures {
    pub mutual_information: f64,
    pub output_entropy: f64,
    /// `H(Y|X)`, the ferromagnetic free energy.
    pub noise_entropy: f64,
    /// `H(X|Y)`.
    pub equivocation: f64,
}

/// `I(X;Y)` with `X` uniform, together with `H(Y)`, `H(Y|X)` and `H(X|Y)`.
pub fn mutual_information_uniform(ch: &Channel) -> InfoMeasures {
    let k = ch.input_size() as f64;
    let output_entropy = ch.output_marginal().entropy();
    let noise_entropy = ch.rows().iter().map(|row| entropy(row)).sum::<f64>() / k;
    // I = H(Y) - H(Y|X), H(X|Y) = H(X) - I
    let mutual_information = (output_entropy - noise_entropy).max(0.0);
    InfoMeasures {
        mutual_information,
        output_entropy,
        noise_entropy,
        equivocation: k.ln() - mutual_information,
    }
}

/// Normalized Gilbert–Varshamov distance: the `δ ∈ [0, 1/2]` with
/// `h(δ) = ln 2 - R`.
pub fn gv_distance_bsc(rate: f64) -> Result<f64> {
    if !(0.0..=LN_2).contains(&rate) {
        return Err(Error::OutOfRange {
            what: "rate",
            value: rate,
            lo: 0.0,
            hi: LN_2,
        });
    }
    if rate == 0.0 {
        return Ok(0.5);
    }
    let target = LN_2 - rate;
    // h is increasing on [0, 1/2]; bisection because h' blows up at 0
    Ok(bisect_first_true(0.0, 0.5, 1e-13, |d| {
        entropy(&[d, 1.0 - d]) >= target
    }))
}

/// Tilted crossover `p_β = p^β / (p^β + (1-p)^β)`.
pub fn bsc_tilted_crossover(p: f64, beta: f64) -> f64 {
    if p == 0.0 || p == 1.0 {
        return p;
    }
    // logistic form avoids under/overflow of p^β at large β
    let logit = beta * (p.ln() - (1.0 - p).ln());
    1.0 / (1.0 + (-logit).exp())
}
