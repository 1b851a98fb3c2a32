//! The Gibbs conditional family `Q_β(x|y) ∝ e^{-β d(x,y)}` and the
//! quantities derived from it for a fixed output law:
//! mean distortion `D_Y(β)`, conditional entropy `H_Y(β)`, the rate
//! `R_Y(β) = ln|X| - H_Y(β)`, the inverse temperature `β_R` matching a rate,
//! the generalized GV distortion `δ_Y(R)`, the constrained entropy `h_0(δ)`
//! and the entropy-constrained maximum `J_Y(β, R)`.
//!
//! Weights are computed in the log domain; `β` is capped at [`BETA_MAX`].

use serde::Serialize;

use crate::channel::{distortion, Channel, ConditionalDistribution, OutputDistribution};
use crate::error::{Error, Result};
use crate::numeric::{bisect_first_true, weighted};

/// Numerical stand-in for `β → ∞`.
pub const BETA_MAX: f64 = 500.0;
/// Bisection tolerance on `β`.
pub const BETA_TOL: f64 = 1e-10;
const RATE_TOL: f64 = 1e-12;

fn tie_tol(d: f64) -> f64 {
    1e-12 * d.abs().max(1.0)
}

/// Support of `Q(.|y)`: the inputs with `p(y|x) > 0` and their distortions.
#[derive(Debug, Clone)]
struct SymbolRow {
    weight: f64,
    inputs: Vec<usize>,
    d: Vec<f64>,
    d_min: f64,
    d_max: f64,
    n_min: usize,
    n_max: usize,
}

#[derive(Debug, Clone, Copy)]
struct RowStats {
    entropy: f64,
    distortion: f64,
    log_partition: f64,
}

impl SymbolRow {
    fn stats(&self, beta: f64) -> RowStats {
        let (max_l, sum) = self.shifted(beta);
        let log_partition = max_l + sum.ln();
        let mut entropy = 0.0;
        let mut distortion = 0.0;
        for &d in &self.d {
            let log_q = -beta * d - max_l - sum.ln();
            let q = log_q.exp();
            if q > 0.0 {
                entropy -= q * log_q;
                distortion += q * d;
            }
        }
        RowStats {
            entropy: entropy.max(0.0),
            distortion,
            log_partition,
        }
    }

    fn shifted(&self, beta: f64) -> (f64, f64) {
        // max of -βd sits at d_min for β ≥ 0 and at d_max for β < 0
        let max_l = if beta >= 0.0 {
            -beta * self.d_min
        } else {
            -beta * self.d_max
        };
        let sum: f64 = self.d.iter().map(|&d| (-beta * d - max_l).exp()).sum();
        (max_l, sum)
    }

    fn probabilities(&self, beta: f64, input_size: usize) -> Vec<f64> {
        let (max_l, sum) = self.shifted(beta);
        let mut col = vec![0.0; input_size];
        for (&x, &d) in self.inputs.iter().zip(&self.d) {
            col[x] = (-beta * d - max_l).exp() / sum;
        }
        col
    }
}

/// Per-output-symbol conditional averages under `Q_β(.|y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymbolStats {
    /// `E_{Q_β}[d(X,y) | Y=y]`; `+inf` for unreachable `y`.
    pub distortion: f64,
    /// `H(Q_β(.|y))`; zero for unreachable `y`.
    pub entropy: f64,
}

/// `H_Y(β)`, `D_Y(β)` and `Σ_y q(y) ln Σ_x e^{-β d(x,y)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Averages {
    pub entropy: f64,
    pub distortion: f64,
    pub log_partition: f64,
}

/// Root of `H_Y(β) = ln|X| - R`, flagged when it is pinned at [`BETA_MAX`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaRoot {
    pub beta: f64,
    pub saturated: bool,
}

/// A point of the Gibbs family with its three averages.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GibbsState {
    pub beta: f64,
    /// `Q_β(x|y)`. Columns of unreachable outputs are uniform placeholders.
    pub q_beta: ConditionalDistribution,
    /// `D_Y(β)`.
    pub d_mean: f64,
    /// `H_Y(β)`.
    pub h_cond: f64,
    /// `R_Y(β) = ln|X| - H_Y(β)`.
    pub rate: f64,
    pub output_dist: OutputDistribution,
    pub per_symbol: Vec<SymbolStats>,
}

/// The Gibbs family of a channel under a fixed output law, with supports and
/// distortions precomputed.
#[derive(Debug, Clone)]
pub struct GibbsFamily {
    input_size: usize,
    out: OutputDistribution,
    rows: Vec<Option<SymbolRow>>,
}

impl GibbsFamily {
    pub fn new(ch: &Channel, out: &OutputDistribution) -> Result<Self> {
        if out.len() != ch.output_size() {
            return Err(Error::InvalidDistribution(format!(
                "output law has {} entries, channel has {} outputs",
                out.len(),
                ch.output_size()
            )));
        }
        let dist = distortion(ch);
        let mut rows = Vec::with_capacity(ch.output_size());
        for y in 0..ch.output_size() {
            let inputs: Vec<usize> = (0..ch.input_size())
                .filter(|&x| ch.prob(x, y) > 0.0)
                .collect();
            if inputs.is_empty() {
                if out[y] > 0.0 {
                    return Err(Error::UnreachableOutput { symbol: y });
                }
                rows.push(None);
                continue;
            }
            let d: Vec<f64> = inputs.iter().map(|&x| dist[x][y]).collect();
            let d_min = d.iter().copied().fold(f64::INFINITY, f64::min);
            let d_max = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            // renormalized rows can split exact ties by an ulp
            let n_min = d.iter().filter(|&&v| v - d_min <= tie_tol(d_min)).count();
            let n_max = d.iter().filter(|&&v| d_max - v <= tie_tol(d_max)).count();
            rows.push(Some(SymbolRow {
                weight: out[y],
                inputs,
                d,
                d_min,
                d_max,
                n_min,
                n_max,
            }));
        }
        Ok(Self {
            input_size: ch.input_size(),
            out: out.clone(),
            rows,
        })
    }

    /// The same family under another output law, without recomputing supports.
    pub fn reweighted(&self, q: &[f64]) -> Result<Self> {
        if q.len() != self.rows.len() {
            return Err(Error::InvalidDistribution(format!(
                "output law has {} entries, channel has {} outputs",
                q.len(),
                self.rows.len()
            )));
        }
        let mut rows = self.rows.clone();
        for (y, (row, &w)) in rows.iter_mut().zip(q).enumerate() {
            match row {
                Some(r) => r.weight = w,
                None if w > 0.0 => return Err(Error::UnreachableOutput { symbol: y }),
                None => {}
            }
        }
        Ok(Self {
            input_size: self.input_size,
            out: OutputDistribution::from_vec_unchecked(q.to_vec()),
            rows,
        })
    }

    /// Outputs with at least one input of positive probability.
    pub fn reachable(&self) -> Vec<usize> {
        (0..self.rows.len())
            .filter(|&y| self.rows[y].is_some())
            .collect()
    }

    pub fn output_dist(&self) -> &OutputDistribution {
        &self.out
    }

    pub fn log_input_size(&self) -> f64 {
        (self.input_size as f64).ln()
    }

    fn weighted_rows(&self) -> impl Iterator<Item = &SymbolRow> {
        self.rows.iter().flatten().filter(|r| r.weight > 0.0)
    }

    pub fn averages(&self, beta: f64) -> Averages {
        let mut acc = Averages {
            entropy: 0.0,
            distortion: 0.0,
            log_partition: 0.0,
        };
        for row in self.weighted_rows() {
            let s = row.stats(beta);
            acc.entropy += row.weight * s.entropy;
            acc.distortion += row.weight * s.distortion;
            acc.log_partition += row.weight * s.log_partition;
        }
        acc
    }

    pub fn symbol_stats(&self, beta: f64) -> Vec<SymbolStats> {
        self.rows
            .iter()
            .map(|row| match row {
                Some(r) => {
                    let s = r.stats(beta);
                    SymbolStats {
                        distortion: s.distortion,
                        entropy: s.entropy,
                    }
                }
                None => SymbolStats {
                    distortion: f64::INFINITY,
                    entropy: 0.0,
                },
            })
            .collect()
    }

    /// `H_Y(0)`: entropy of the uniform law on each support.
    pub fn entropy_ceiling(&self) -> f64 {
        self.weighted_rows()
            .map(|r| r.weight * (r.inputs.len() as f64).ln())
            .sum()
    }

    /// `lim_{β→∞} H_Y(β)`: entropy of the uniform law on each argmin set.
    pub fn entropy_floor(&self) -> f64 {
        self.weighted_rows()
            .map(|r| r.weight * (r.n_min as f64).ln())
            .sum()
    }

    /// Achievable mean-distortion interval `[Σ q min d, Σ q max d]`.
    pub fn distortion_range(&self) -> (f64, f64) {
        self.weighted_rows().fold((0.0, 0.0), |(lo, hi), r| {
            (
                lo + weighted(r.weight, r.d_min),
                hi + weighted(r.weight, r.d_max),
            )
        })
    }

    pub fn state(&self, beta: f64) -> GibbsState {
        let columns = self
            .rows
            .iter()
            .map(|row| match row {
                Some(r) => r.probabilities(beta, self.input_size),
                None => vec![1.0 / self.input_size as f64; self.input_size],
            })
            .collect();
        let avg = self.averages(beta);
        GibbsState {
            beta,
            q_beta: ConditionalDistribution::from_columns_unchecked(columns),
            d_mean: avg.distortion,
            h_cond: avg.entropy,
            rate: self.log_input_size() - avg.entropy,
            output_dist: self.out.clone(),
            per_symbol: self.symbol_stats(beta),
        }
    }

    fn check_rate(&self, rate: f64) -> Result<()> {
        let ln_x = self.log_input_size();
        if !(rate >= -RATE_TOL && rate <= ln_x + RATE_TOL) {
            return Err(Error::OutOfRange {
                what: "rate",
                value: rate,
                lo: 0.0,
                hi: ln_x,
            });
        }
        Ok(())
    }

    /// `β_R`: the smallest `β ≥ 0` with `H_Y(β) ≤ ln|X| - R`.
    pub fn solve_beta_r(&self, rate: f64) -> Result<BetaRoot> {
        self.check_rate(rate)?;
        let target = self.log_input_size() - rate;
        let ceiling = self.entropy_ceiling();
        if target > ceiling + RATE_TOL {
            return Err(Error::RateUnreachable {
                rate,
                min_rate: self.log_input_size() - ceiling,
            });
        }
        // the floor is only reached as β → ∞, where the weights underflow
        let at_floor = target <= self.entropy_floor() + RATE_TOL && ceiling > self.entropy_floor();
        if at_floor || self.averages(BETA_MAX).entropy > target {
            return Ok(BetaRoot {
                beta: BETA_MAX,
                saturated: true,
            });
        }
        let beta = bisect_first_true(0.0, BETA_MAX, BETA_TOL, |b| {
            self.averages(b).entropy <= target
        });
        Ok(BetaRoot {
            beta,
            saturated: false,
        })
    }

    /// `δ_Y(R) = D_Y(β_R)`.
    pub fn delta_y(&self, rate: f64) -> Result<f64> {
        let root = self.solve_beta_r(rate)?;
        Ok(self.averages(root.beta).distortion)
    }

    /// `h_0(δ)`: the largest `H_Q(X|Y)` with `E_Q d = δ`, attained on the
    /// Gibbs family at the (possibly negative) `β` solving `D_Y(β) = δ`.
    pub fn h0(&self, delta: f64) -> Result<f64> {
        let (lo, hi) = self.distortion_range();
        let tol = 1e-12 * hi.abs().max(1.0);
        if !(delta >= lo - tol && delta <= hi + tol) {
            return Err(Error::DistortionOutOfRange { delta, lo, hi });
        }
        if hi - lo <= tol {
            return Ok(self.entropy_ceiling());
        }
        if delta <= lo + tol {
            return Ok(self.entropy_floor());
        }
        if delta >= hi - tol {
            return Ok(self
                .weighted_rows()
                .map(|r| r.weight * (r.n_max as f64).ln())
                .sum());
        }
        if self.averages(BETA_MAX).distortion > delta {
            return Ok(self.averages(BETA_MAX).entropy);
        }
        if self.averages(-BETA_MAX).distortion < delta {
            return Ok(self.averages(-BETA_MAX).entropy);
        }
        let beta = bisect_first_true(-BETA_MAX, BETA_MAX, BETA_TOL, |b| {
            self.averages(b).distortion <= delta
        });
        Ok(self.averages(beta).entropy)
    }

    /// `J_Y(β, R) = max { H_Q(X|Y) - β E_Q d : H_Q(X|Y) ≥ ln|X| - R }`.
    ///
    /// The constraint is slack exactly when `R > R_Y(β)`, in which case the
    /// unconstrained Gibbs point is optimal; otherwise it binds and the
    /// optimum is `ln|X| - R - β D_Y(β_R)`.
    pub fn j(&self, beta: f64, rate: f64) -> Result<f64> {
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::OutOfRange {
                what: "beta",
                value: beta,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        self.check_rate(rate)?;
        let target = self.log_input_size() - rate;
        let ceiling = self.entropy_ceiling();
        if target > ceiling + RATE_TOL {
            return Err(Error::InfeasibleConstraint {
                required: target,
                attainable: ceiling,
            });
        }
        let avg = self.averages(beta);
        if avg.entropy >= target {
            return Ok(avg.entropy - beta * avg.distortion);
        }
        let root = self.solve_beta_r(rate)?;
        Ok(target - beta * self.averages(root.beta).distortion)
    }
}

pub fn gibbs_state(ch: &Channel, out: &OutputDistribution, beta: f64) -> Result<GibbsState> {
    if !beta.is_finite() {
        return Err(Error::OutOfRange {
            what: "beta",
            value: beta,
            lo: -BETA_MAX,
            hi: BETA_MAX,
        });
    }
    Ok(GibbsFamily::new(ch, out)?.state(beta))
}

pub fn j_function(ch: &Channel, out: &OutputDistribution, beta: f64, rate: f64) -> Result<f64> {
    GibbsFamily::new(ch, out)?.j(beta, rate)
}

pub fn solve_beta_r(ch: &Channel, out: &OutputDistribution, rate: f64) -> Result<BetaRoot> {
    GibbsFamily::new(ch, out)?.solve_beta_r(rate)
}

pub fn delta_y(ch: &Channel, out: &OutputDistribution, rate: f64) -> Result<f64> {
    GibbsFamily::new(ch, out)?.delta_y(rate)
}

pub fn h0(ch: &Channel, out: &OutputDistribution, delta: f64) -> Result<f64> {
    GibbsFamily::new(ch, out)?.h0(delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{binary_entropy, gv_distance_bsc};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    fn bsc(p: f64) -> (Channel, OutputDistribution) {
        (Channel::bsc(p).unwrap(), OutputDistribution::uniform(2))
    }

    fn skewed() -> Channel {
        Channel::new(vec![
            vec![0.7, 0.2, 0.1],
            vec![0.1, 0.6, 0.3],
            vec![0.25, 0.25, 0.5],
        ])
        .unwrap()
    }

    #[test]
    fn beta_one_is_the_posterior() {
        let ch = skewed();
        let out = ch.output_marginal();
        let s = gibbs_state(&ch, &out, 1.0).unwrap();
        for y in 0..3 {
            let col: f64 = (0..3).map(|x| ch.prob(x, y)).sum();
            for x in 0..3 {
                assert_abs_diff_eq!(s.q_beta.get(x, y), ch.prob(x, y) / col, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn beta_zero_is_uniform() {
        let (ch, out) = bsc(0.1);
        let s = gibbs_state(&ch, &out, 0.0).unwrap();
        assert_abs_diff_eq!(s.h_cond, LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(
            s.d_mean,
            0.5 * (-(0.9f64.ln()) - 0.1f64.ln()),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(s.rate, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn bsc_beta_one_flip_probability() {
        let (ch, out) = bsc(0.1);
        let s = gibbs_state(&ch, &out, 1.0).unwrap();
        assert_abs_diff_eq!(s.q_beta.get(1, 0), 0.1, epsilon = 1e-14);
        assert_abs_diff_eq!(s.h_cond, binary_entropy(0.1).unwrap(), epsilon = 1e-14);
    }

    #[test]
    fn normalization_and_mean_consistency() {
        let ch = skewed();
        let out = OutputDistribution::new(vec![0.2, 0.5, 0.3]).unwrap();
        let d = distortion(&ch);
        for beta in [0.0, 0.3, 1.0, 4.0, 60.0, BETA_MAX] {
            let s = gibbs_state(&ch, &out, beta).unwrap();
            let mut mean = 0.0;
            for y in 0..3 {
                let col = s.q_beta.column(y);
                assert_abs_diff_eq!(col.iter().sum::<f64>(), 1.0, epsilon = 1e-14);
                mean += out[y] * (0..3).map(|x| col[x] * d[x][y]).sum::<f64>();
            }
            assert_abs_diff_eq!(s.d_mean, mean, epsilon = 1e-10);
            assert!(s.h_cond >= 0.0 && s.h_cond <= 3f64.ln() + 1e-15);
        }
    }

    #[test]
    fn unreachable_output_is_rejected() {
        let ch = Channel::new(vec![vec![0.5, 0.5, 0.0], vec![0.2, 0.8, 0.0]]).unwrap();
        let out = OutputDistribution::new(vec![0.4, 0.4, 0.2]).unwrap();
        assert_eq!(
            gibbs_state(&ch, &out, 1.0).unwrap_err(),
            Error::UnreachableOutput { symbol: 2 }
        );
        let ok = OutputDistribution::new(vec![0.5, 0.5, 0.0]).unwrap();
        assert!(gibbs_state(&ch, &ok, 1.0).is_ok());
    }

    #[test]
    fn zero_probabilities_leave_the_support() {
        let ch = Channel::new(vec![vec![1.0, 0.0], vec![0.3, 0.7]]).unwrap();
        let out = ch.output_marginal();
        let s = gibbs_state(&ch, &out, 0.0).unwrap();
        // y=1 is only reachable from x=1
        assert_eq!(s.q_beta.get(0, 1), 0.0);
        assert_eq!(s.q_beta.get(1, 1), 1.0);
        assert!(s.d_mean.is_finite());
    }

    #[test]
    fn beta_r_fixed_point_at_one() {
        let ch = skewed();
        let out = ch.output_marginal();
        let fam = GibbsFamily::new(&ch, &out).unwrap();
        let rate = fam.log_input_size() - fam.averages(1.0).entropy;
        let root = fam.solve_beta_r(rate).unwrap();
        assert!(!root.saturated);
        assert_abs_diff_eq!(root.beta, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(
            fam.delta_y(rate).unwrap(),
            fam.averages(1.0).distortion,
            epsilon = 1e-9
        );
    }

    #[test]
    fn beta_r_saturates_at_full_rate() {
        let ch = skewed();
        let out = ch.output_marginal();
        let root = solve_beta_r(&ch, &out, 3f64.ln()).unwrap();
        assert!(root.saturated);
        assert_eq!(root.beta, BETA_MAX);
    }

    #[test]
    fn beta_r_bsc_closed_form() {
        let (ch, out) = bsc(0.1);
        let delta = gv_distance_bsc(0.2).unwrap();
        let expected = ((1.0 - delta) / delta).ln() / 9f64.ln();
        let root = solve_beta_r(&ch, &out, 0.2).unwrap();
        assert_abs_diff_eq!(root.beta, expected, epsilon = 1e-9);
        assert_abs_diff_eq!(root.beta, 0.645, epsilon = 1e-3);
    }

    #[test]
    fn unreachable_rate_reports_minimum() {
        // x=0 never produces y=1, so H_Y(0) < ln 2
        let ch = Channel::new(vec![vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
        let out = ch.output_marginal();
        let err = solve_beta_r(&ch, &out, 0.01).unwrap_err();
        match err {
            Error::RateUnreachable { min_rate, .. } => {
                assert_abs_diff_eq!(min_rate, 0.25 * LN_2, epsilon = 1e-12)
            }
            e => panic!("{e}"),
        }
        assert!(matches!(
            j_function(&ch, &out, 1.0, 0.01).unwrap_err(),
            Error::InfeasibleConstraint { .. }
        ));
    }

    #[test]
    fn delta_y_bsc_in_both_units() {
        let p: f64 = 0.1;
        let (ch, out) = bsc(p);
        for rate in [0.05, 0.2, 0.4, 0.6] {
            let gv = gv_distance_bsc(rate).unwrap();
            let energy = gv * (1.0 / p).ln() + (1.0 - gv) * (1.0 / (1.0 - p)).ln();
            let got = delta_y(&ch, &out, rate).unwrap();
            assert_abs_diff_eq!(got, energy, epsilon = 1e-9);
            let hamming = (got - (1.0 / (1.0 - p)).ln()) / ((1.0 - p) / p).ln();
            assert_abs_diff_eq!(hamming, gv, epsilon = 1e-9);
        }
    }

    #[test]
    fn delta_y_of_useless_channel_is_constant() {
        let ch = Channel::new(vec![vec![0.2, 0.3, 0.5]; 3]).unwrap();
        let out = ch.output_marginal();
        let fam = GibbsFamily::new(&ch, &out).unwrap();
        let constant = fam.averages(0.0).distortion;
        // H_Y(β) = ln 3 for every β, so only R = 0 is reachable and every β has the same D
        assert_abs_diff_eq!(fam.delta_y(0.0).unwrap(), constant, epsilon = 1e-14);
        for beta in [0.0, 1.0, 10.0] {
            assert_abs_diff_eq!(fam.averages(beta).distortion, constant, epsilon = 1e-14);
        }
    }

    #[test]
    fn j_examples() {
        let ch = skewed();
        let out = ch.output_marginal();
        let fam = GibbsFamily::new(&ch, &out).unwrap();
        let ln3 = 3f64.ln();
        for beta in [0.0, 0.7, 2.0] {
            let avg = fam.averages(beta);
            assert_abs_diff_eq!(
                fam.j(beta, ln3).unwrap(),
                avg.entropy - beta * avg.distortion,
                epsilon = 1e-14
            );
        }
        assert_abs_diff_eq!(fam.j(0.0, ln3).unwrap(), ln3, epsilon = 1e-14);
        assert!(fam.j(-1.0, 0.5).is_err());
    }

    #[test]
    fn j_bsc_binding_branch() {
        let p: f64 = 0.1;
        let (ch, out) = bsc(p);
        let gv = gv_distance_bsc(0.2).unwrap();
        let fg = gv * (1.0 / p).ln() + (1.0 - gv) * (1.0 / (1.0 - p)).ln();
        assert_abs_diff_eq!(
            j_function(&ch, &out, 2.0, 0.2).unwrap(),
            LN_2 - 0.2 - 2.0 * fg,
            epsilon = 1e-9
        );
    }

    #[test]
    fn branches_agree_at_the_switch() {
        let ch = skewed();
        let out = OutputDistribution::new(vec![0.3, 0.3, 0.4]).unwrap();
        let fam = GibbsFamily::new(&ch, &out).unwrap();
        for beta in [0.2, 0.9, 1.7, 5.0] {
            let avg = fam.averages(beta);
            let switch = fam.log_input_size() - avg.entropy;
            let unconstrained = avg.entropy - beta * avg.distortion;
            let root = fam.solve_beta_r(switch).unwrap();
            let binding = fam.log_input_size() - switch - beta * fam.averages(root.beta).distortion;
            assert_abs_diff_eq!(unconstrained, binding, epsilon = 1e-9);
            assert_abs_diff_eq!(fam.j(beta, switch).unwrap(), unconstrained, epsilon = 1e-9);
        }
    }

    #[test]
    fn h0_examples() {
        let ch = skewed();
        let out = ch.output_marginal();
        let fam = GibbsFamily::new(&ch, &out).unwrap();
        assert_abs_diff_eq!(
            fam.h0(fam.averages(0.0).distortion).unwrap(),
            3f64.ln(),
            epsilon = 1e-9
        );
        let (lo, hi) = fam.distortion_range();
        assert_eq!(fam.h0(lo).unwrap(), 0.0);
        assert!(matches!(
            fam.h0(hi + 0.1),
            Err(Error::DistortionOutOfRange { .. })
        ));
        assert!(matches!(
            fam.h0(lo - 0.1),
            Err(Error::DistortionOutOfRange { .. })
        ));
    }

    #[test]
    fn h0_minimum_with_ties() {
        // y=0 is most likely under x=0 and x=1 equally
        let ch = Channel::new(vec![
            vec![0.6, 0.3, 0.1],
            vec![0.6, 0.1, 0.3],
            vec![0.2, 0.4, 0.4],
        ])
        .unwrap();
        let out = OutputDistribution::new(vec![0.5, 0.25, 0.25]).unwrap();
        let fam = GibbsFamily::new(&ch, &out).unwrap();
        let (lo, _) = fam.distortion_range();
        // y=1 and y=2 have unique argmins
        let expected = 0.5 * 2f64.ln();
        assert_abs_diff_eq!(fam.h0(lo).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn h0_bsc_is_binary_entropy() {
        let p: f64 = 0.1;
        let (ch, out) = bsc(p);
        let fam = GibbsFamily::new(&ch, &out).unwrap();
        for delta_h in [0.01, 0.1, 0.25, 0.5, 0.7, 0.95] {
            let energy = delta_h * (1.0 / p).ln() + (1.0 - delta_h) * (1.0 / (1.0 - p)).ln();
            assert_abs_diff_eq!(
                fam.h0(energy).unwrap(),
                binary_entropy(delta_h).unwrap(),
                epsilon = 1e-8
            );
        }
    }
}
