//! Random-coding exponents from the free-energy picture.
//!
//! Above `I(X;Y)` the correct-decoding exponent is
//! `R - max_Y [H(Y) - F_g(Y)]`, with `β_R` re-solved for every candidate `Y`.
//! Below `I(X;Y)` the error exponent at a fixed `ρ ∈ [0, 1]` is
//! `min_Y [ρβF_p(β,Y) - Σ_y Y(y)Γ(y) - H(Y)]` with `β = 1/(1+ρ)`. Both
//! optimizations run over the simplex of reachable outputs.

use serde::Serialize;

use crate::channel::{mutual_information_uniform, Channel, OutputDistribution};
use crate::error::{Error, Result};
use crate::gibbs::{BetaRoot, GibbsFamily};
use crate::numeric::{entropy, golden_section_max, linspace, log_sum_exp};
use crate::simplex::{maximize, SimplexObjective, SimplexOptions};

const RHO_GRID: usize = 21;
const RHO_TOL: f64 = 1e-10;
const RHO_SNAP: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExponentAux {
    Correct { beta_r: f64, saturated: bool },
    Error { rho: f64, beta: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentResult {
    pub rate: f64,
    pub exponent: f64,
    /// The maximizing (correct decoding) or minimizing (error) output law.
    pub optimizer_y: OutputDistribution,
    pub aux: ExponentAux,
    /// Closed-form value at the optimizer, where one exists.
    pub crosscheck: Option<f64>,
}

/// `Γ(y) = ln Σ_x p(y|x)^β - ln|X|`; `-inf` for outputs no input reaches.
pub fn gamma_of_y(ch: &Channel, beta: f64) -> Result<Vec<f64>> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::OutOfRange {
            what: "beta",
            value: beta,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    Ok(log_tilted_columns(ch, beta)
        .into_iter()
        .map(|a| a - ch.log_input_size())
        .collect())
}

/// `ln Σ_x p(y|x)^β` per output.
fn log_tilted_columns(ch: &Channel, beta: f64) -> Vec<f64> {
    (0..ch.output_size())
        .map(|y| {
            let logs: Vec<f64> = (0..ch.input_size())
                .filter(|&x| ch.prob(x, y) > 0.0)
                .map(|x| beta * ch.prob(x, y).ln())
                .collect();
            log_sum_exp(&logs)
        })
        .collect()
}

/// Gallager's `E_0(ρ) = -ln Σ_y (Σ_x |X|^{-1} p(y|x)^{1/(1+ρ)})^{1+ρ}` for
/// the uniform input.
pub fn gallager_e0(ch: &Channel, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let s = 1.0 + rho;
    let terms: Vec<f64> = gamma_of_y(ch, 1.0 / s)?
        .into_iter()
        .map(|g| s * g)
        .collect();
    Ok(-log_sum_exp(&terms))
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::OutOfRange {
            what: "rho",
            value: rho,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(())
}

fn embed(reach: &[usize], size: usize, z: &[f64]) -> Vec<f64> {
    let mut q = vec![0.0; size];
    for (&y, &v) in reach.iter().zip(z) {
        q[y] = v;
    }
    q
}

fn floored_log(v: f64) -> f64 {
    v.max(1e-300).ln()
}

/// `G(Y) = H(Y) - F_g(Y)` over the reachable outputs.
struct CorrectObjective<'a> {
    base: &'a GibbsFamily,
    reach: Vec<usize>,
    size: usize,
    rate: f64,
}

impl CorrectObjective<'_> {
    fn solve(&self, z: &[f64]) -> Option<(GibbsFamily, BetaRoot)> {
        let fam = self
            .base
            .reweighted(&embed(&self.reach, self.size, z))
            .ok()?;
        let root = fam.solve_beta_r(self.rate).ok()?;
        Some((fam, root))
    }
}

impl SimplexObjective for CorrectObjective<'_> {
    fn value(&self, z: &[f64]) -> f64 {
        match self.solve(z) {
            Some((fam, root)) => entropy(z) - fam.averages(root.beta).distortion,
            None => f64::NEG_INFINITY,
        }
    }

    fn gradient(&self, z: &[f64]) -> Vec<f64> {
        let Some((fam, root)) = self.solve(z) else {
            return vec![0.0; z.len()];
        };
        let stats = fam.symbol_stats(root.beta);
        // envelope term from the entropy constraint, absent once β_R is pinned
        let multiplier = if root.saturated || root.beta < 1e-12 {
            0.0
        } else {
            1.0 / root.beta
        };
        self.reach
            .iter()
            .zip(z)
            .map(|(&y, &v)| {
                -floored_log(v) - 1.0 - stats[y].distortion + multiplier * stats[y].entropy
            })
            .collect()
    }
}

/// Exponent of the probability of correct decoding above `I(X;Y)`,
/// `R - max_Y [H(Y) - F_g(Y)]`.
///
/// The crosscheck is `R - ln Σ_y e^{-f_g(y)}` with `f_g(y)` the conditional
/// mean distortion at `β_R` of the optimizer. It equals the exponent on
/// symmetric channels and can fall below it otherwise.
pub fn correct_decoding_exponent(ch: &Channel, rate: f64) -> Result<ExponentResult> {
    correct_decoding_exponent_with(ch, rate, &SimplexOptions::default())
}

pub fn correct_decoding_exponent_with(
    ch: &Channel,
    rate: f64,
    opts: &SimplexOptions,
) -> Result<ExponentResult> {
    let info = mutual_information_uniform(ch);
    if rate <= info.mutual_information {
        return Err(Error::BelowCapacity {
            rate,
            mutual_information: info.mutual_information,
        });
    }
    let ln_x = ch.log_input_size();
    if rate > ln_x {
        return Err(Error::OutOfRange {
            what: "rate",
            value: rate,
            lo: info.mutual_information,
            hi: ln_x,
        });
    }
    let base = GibbsFamily::new(ch, &ch.output_marginal())?;
    let obj = CorrectObjective {
        reach: base.reachable(),
        base: &base,
        size: ch.output_size(),
        rate,
    };
    let best = maximize(&obj, obj.reach.len(), opts)?;
    let (fam, root) = obj
        .solve(&best.point)
        .ok_or_else(|| Error::Optimization("optimizer left the feasible set".into()))?;
    let stats = fam.symbol_stats(root.beta);
    let closed: Vec<f64> = obj.reach.iter().map(|&y| -stats[y].distortion).collect();
    Ok(ExponentResult {
        rate,
        exponent: rate - best.value,
        optimizer_y: fam.output_dist().clone(),
        aux: ExponentAux::Correct {
            beta_r: root.beta,
            saturated: root.saturated,
        },
        crosscheck: Some(rate - log_sum_exp(&closed)),
    })
}

/// `-(objective)` of the error exponent, maximized over the simplex.
struct ErrorObjective {
    tilted: Vec<f64>,
    rho: f64,
    offset: f64,
}

impl SimplexObjective for ErrorObjective {
    fn value(&self, z: &[f64]) -> f64 {
        let linear: f64 = z.iter().zip(&self.tilted).map(|(q, a)| q * a).sum();
        entropy(z) + (1.0 + self.rho) * linear - self.offset
    }

    fn gradient(&self, z: &[f64]) -> Vec<f64> {
        z.iter()
            .zip(&self.tilted)
            .map(|(&q, &a)| -floored_log(q) - 1.0 + (1.0 + self.rho) * a)
            .collect()
    }
}

fn check_error_rate(ch: &Channel, rate: f64) -> Result<f64> {
    let info = mutual_information_uniform(ch);
    // rates computed as fractions of I may overshoot it by an ulp
    if rate > info.mutual_information + 1e-12 {
        return Err(Error::AboveCapacity {
            rate,
            mutual_information: info.mutual_information,
        });
    }
    if rate < 0.0 {
        return Err(Error::OutOfRange {
            what: "rate",
            value: rate,
            lo: 0.0,
            hi: info.mutual_information,
        });
    }
    Ok(info.mutual_information)
}

/// Error exponent at fixed `ρ` with its minimizing output law.
pub fn error_exponent_detail(ch: &Channel, rate: f64, rho: f64) -> Result<ExponentResult> {
    check_rho(rho)?;
    check_error_rate(ch, rate)?;
    error_exponent_unchecked(ch, rate, rho, &SimplexOptions::default())
}

fn error_exponent_unchecked(
    ch: &Channel,
    rate: f64,
    rho: f64,
    opts: &SimplexOptions,
) -> Result<ExponentResult> {
    let beta = 1.0 / (1.0 + rho);
    let all = log_tilted_columns(ch, beta);
    let reach: Vec<usize> = (0..ch.output_size())
        .filter(|&y| all[y].is_finite())
        .collect();
    let ln_x = ch.log_input_size();
    let obj = ErrorObjective {
        tilted: reach.iter().map(|&y| all[y]).collect(),
        rho,
        offset: (1.0 + rho) * ln_x - rho * rate,
    };
    let best = maximize(&obj, reach.len(), opts)?;
    Ok(ExponentResult {
        rate,
        exponent: -best.value,
        optimizer_y: OutputDistribution::from_vec_unchecked(embed(
            &reach,
            ch.output_size(),
            &best.point,
        )),
        aux: ExponentAux::Error { rho, beta },
        crosscheck: Some(gallager_e0(ch, rho)? - rho * rate),
    })
}

/// `min_Y [(1+ρ) ln|X| - ρR - (1+ρ) Σ_y Y(y) ln Σ_x p^β(y|x) - H(Y)]`.
pub fn error_exponent(ch: &Channel, rate: f64, rho: f64) -> Result<f64> {
    Ok(error_exponent_detail(ch, rate, rho)?.exponent)
}

/// Maximizes the error exponent over `ρ ∈ [0, 1]`: a 21-point grid followed
/// by golden-section refinement around the best grid point.
pub fn optimize_rho(ch: &Channel, rate: f64) -> Result<ExponentResult> {
    check_error_rate(ch, rate)?;
    let opts = SimplexOptions::default();
    let eval = |rho: f64| error_exponent_unchecked(ch, rate, rho, &opts).map(|r| r.exponent);
    let grid = linspace(0.0, 1.0, RHO_GRID);
    let values = grid.iter().map(|&r| eval(r)).collect::<Result<Vec<_>>>()?;
    let mut i_best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[i_best] {
            i_best = i;
        }
    }
    let lo = grid[i_best.saturating_sub(1)];
    let hi = grid[(i_best + 1).min(RHO_GRID - 1)];
    let (mut rho, mut best) = (grid[i_best], values[i_best]);
    let (r_gs, v_gs) =
        golden_section_max(lo, hi, RHO_TOL, |r| eval(r).unwrap_or(f64::NEG_INFINITY));
    if v_gs > best {
        rho = r_gs;
        best = v_gs;
    }
    if 1.0 - rho <= RHO_SNAP && values[RHO_GRID - 1] >= best {
        rho = 1.0;
    }
    error_exponent_unchecked(ch, rate, rho, &opts)
}

/// Closed forms for the binary symmetric channel.
pub mod bsc {
    use std::f64::consts::LN_2;

    use crate::channel::{
        binary_divergence, binary_entropy, bsc_tilted_crossover, gv_distance_bsc,
    };
    use crate::error::Result;

    /// `D(δ_GV(R) ‖ p)`.
    pub fn correct_exponent(p: f64, rate: f64) -> Result<f64> {
        binary_divergence(gv_distance_bsc(rate)?, p)
    }

    /// `ρ ln 2 - (1+ρ) ln(p^{1/(1+ρ)} + (1-p)^{1/(1+ρ)})`.
    pub fn e0(p: f64, rho: f64) -> f64 {
        let beta = 1.0 / (1.0 + rho);
        rho * LN_2 - (1.0 + rho) * (p.powf(beta) + (1.0 - p).powf(beta)).ln()
    }

    /// Below this rate the optimal `ρ` is 1: `ln 2 - h(p_{1/2})`.
    pub fn critical_rate(p: f64) -> Result<f64> {
        Ok(LN_2 - binary_entropy(bsc_tilted_crossover(p, 0.5))?)
    }
}
