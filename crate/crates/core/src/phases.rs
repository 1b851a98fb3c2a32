//! Free energies and phase diagrams of the finite-temperature MAP decoder
//! and of the minimum-conditional-entropy universal decoder.
//!
//! For the MAP decoder the incorrect codewords contribute
//! `F_e = F_p(β)` for `β < β_c(R)` (paramagnetic) and `F_e = F_g = δ_Y(R)`
//! for `β ≥ β_c(R)` (glassy); the correct codeword contributes
//! `F_c = H(Y|X)`. Points where two free energies agree within
//! [`BOUNDARY_TOL`] are labelled with the lower-temperature phase.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{mutual_information_uniform, Channel, OutputDistribution};
use crate::error::{Error, Result};
use crate::gibbs::{BetaRoot, GibbsFamily, BETA_MAX, BETA_TOL};
use crate::numeric::bisect_first_true;

/// Free-energy tolerance used to resolve phase boundaries.
pub const BOUNDARY_TOL: f64 = 1e-9;
/// Lower end of the bracket for `β_0(R)`.
pub const BETA_0_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Ferromagnetic,
    Paramagnetic,
    Glassy,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Ferromagnetic => "ferromagnetic",
            Phase::Paramagnetic => "paramagnetic",
            Phase::Glassy => "glassy",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decoder {
    Map,
    Universal,
}

impl fmt::Display for Decoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decoder::Map => "map",
            Decoder::Universal => "universal",
        })
    }
}

impl FromStr for Decoder {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "map" => Ok(Decoder::Map),
            "universal" => Ok(Decoder::Universal),
            other => Err(format!(
                "unknown decoder '{other}' (expected map or universal)"
            )),
        }
    }
}

/// A classified point of the `(R, T)` plane with the free energies that
/// decided it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhasePoint {
    pub rate: f64,
    pub temperature: f64,
    pub phase: Phase,
    /// `F_c`, the correct-codeword free energy.
    pub f_ferro: f64,
    /// `F_e`, the incorrect-codeword free energy on the branch selected by `β_c`.
    pub f_incorrect: f64,
    pub f_glassy: f64,
    pub f_para: f64,
    pub output_dist: OutputDistribution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    GlassyPara,
    FerroPara,
    FerroGlassy,
}

impl BoundaryKind {
    pub const ALL: [BoundaryKind; 3] = [
        BoundaryKind::GlassyPara,
        BoundaryKind::FerroPara,
        BoundaryKind::FerroGlassy,
    ];
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryKind::GlassyPara => "glassy_para",
            BoundaryKind::FerroPara => "ferro_para",
            BoundaryKind::FerroGlassy => "ferro_glassy",
        })
    }
}

/// Samples `(R, T)` of one phase boundary, increasing in `R`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryCurve {
    pub kind: BoundaryKind,
    pub samples: Vec<(f64, f64)>,
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::OutOfRange {
            what: "beta",
            value: beta,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    Ok(())
}

fn check_open_rate(ch: &Channel, rate: f64) -> Result<()> {
    let ln_x = ch.log_input_size();
    if !(rate > 0.0 && rate < ln_x) {
        return Err(Error::OutOfRange {
            what: "rate",
            value: rate,
            lo: 0.0,
            hi: ln_x,
        });
    }
    Ok(())
}

fn check_temperature(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::OutOfRange {
            what: "temperature",
            value: t,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    Ok(())
}

/// `F_g(Y) = δ_Y(R)`.
pub fn free_energy_glassy(ch: &Channel, out: &OutputDistribution, rate: f64) -> Result<f64> {
    GibbsFamily::new(ch, out)?.delta_y(rate)
}

/// `F_p(β, Y) = D_Y(β) + (ln|X| - R - H_Y(β)) / β`.
pub fn free_energy_para(
    ch: &Channel,
    out: &OutputDistribution,
    beta: f64,
    rate: f64,
) -> Result<f64> {
    check_beta(beta)?;
    Ok(para(&GibbsFamily::new(ch, out)?, beta, rate))
}

fn para(fam: &GibbsFamily, beta: f64, rate: f64) -> f64 {
    let avg = fam.averages(beta);
    avg.distortion + (fam.log_input_size() - rate - avg.entropy) / beta
}

/// `β_c(R) = inf { β : R_Y(β) ≥ R }`, the glassy transition.
pub fn beta_c(ch: &Channel, out: &OutputDistribution, rate: f64) -> Result<BetaRoot> {
    GibbsFamily::new(ch, out)?.solve_beta_r(rate)
}

/// `β_0(R)`, the ferro–paramagnetic transition below `I(X;Y)`.
///
/// `F_p(β)` increases on `(0, β_c]`, so the root of `F_p(β) = H(Y|X)` in that
/// bracket is unique. At `R = I(X;Y)` the triple point `β_c(I)` is returned.
pub fn beta_0(ch: &Channel, out: &OutputDistribution, rate: f64) -> Result<f64> {
    let info = mutual_information_uniform(ch);
    let fam = GibbsFamily::new(ch, out)?;
    beta_0_with(&fam, info.mutual_information, info.noise_entropy, rate)
}

fn beta_0_with(fam: &GibbsFamily, mutual_information: f64, f_c: f64, rate: f64) -> Result<f64> {
    if rate > mutual_information + BOUNDARY_TOL {
        return Err(Error::AboveCapacity {
            rate,
            mutual_information,
        });
    }
    let hi = fam.solve_beta_r(rate)?.beta;
    if (rate - mutual_information).abs() <= BOUNDARY_TOL {
        return Ok(hi);
    }
    let lo = BETA_0_FLOOR.min(hi);
    let gap = |b: f64| para(fam, b, rate) - f_c;
    let (f_lo, f_hi) = (gap(lo), gap(hi));
    if !(f_lo < 0.0 && f_hi >= 0.0) {
        return Err(Error::NoRoot { lo, hi, f_lo, f_hi });
    }
    Ok(bisect_first_true(lo, hi, BETA_TOL, |b| gap(b) >= 0.0))
}

/// Cached per-channel quantities for repeated classification.
struct Engine {
    fam: GibbsFamily,
    ln_x: f64,
    mutual_information: f64,
    noise_entropy: f64,
    equivocation: f64,
}

impl Engine {
    fn new(ch: &Channel, out: &OutputDistribution) -> Result<Self> {
        let info = mutual_information_uniform(ch);
        Ok(Self {
            fam: GibbsFamily::new(ch, out)?,
            ln_x: ch.log_input_size(),
            mutual_information: info.mutual_information,
            noise_entropy: info.noise_entropy,
            equivocation: info.equivocation,
        })
    }

    fn classify(&self, rate: f64, temperature: f64) -> Result<PhasePoint> {
        let beta = 1.0 / temperature;
        let root = self.fam.solve_beta_r(rate)?;
        let f_glassy = self.fam.averages(root.beta).distortion;
        let f_para = para(&self.fam, beta, rate);
        let f_incorrect = if beta >= root.beta { f_glassy } else { f_para };
        let f_ferro = self.noise_entropy;
        let phase = if rate > self.mutual_information + BOUNDARY_TOL {
            if beta >= root.beta {
                Phase::Glassy
            } else {
                Phase::Paramagnetic
            }
        } else if f_ferro <= f_incorrect + BOUNDARY_TOL {
            Phase::Ferromagnetic
        } else if beta >= root.beta {
            Phase::Glassy
        } else {
            Phase::Paramagnetic
        };
        Ok(PhasePoint {
            rate,
            temperature,
            phase,
            f_ferro,
            f_incorrect,
            f_glassy,
            f_para,
            output_dist: self.fam.output_dist().clone(),
        })
    }

    fn universal_classify(&self, rate: f64, temperature: f64) -> PhasePoint {
        let beta = 1.0 / temperature;
        let f_glassy = self.ln_x - rate;
        let f_para = self.ln_x - rate / beta;
        let glassy = beta >= 1.0;
        let f_incorrect = if glassy { f_glassy } else { f_para };
        let f_ferro = self.equivocation;
        let phase = if f_ferro <= f_incorrect + BOUNDARY_TOL {
            Phase::Ferromagnetic
        } else if glassy {
            Phase::Glassy
        } else {
            Phase::Paramagnetic
        };
        PhasePoint {
            rate,
            temperature,
            phase,
            f_ferro,
            f_incorrect,
            f_glassy,
            f_para,
            output_dist: self.fam.output_dist().clone(),
        }
    }

    fn point(&self, decoder: Decoder, rate: f64, temperature: f64) -> Result<PhasePoint> {
        match decoder {
            Decoder::Map => self.classify(rate, temperature),
            Decoder::Universal => Ok(self.universal_classify(rate, temperature)),
        }
    }
}

/// Phase of the finite-temperature MAP decoder at `(R, T)`.
pub fn classify(
    ch: &Channel,
    out: &OutputDistribution,
    rate: f64,
    temperature: f64,
) -> Result<PhasePoint> {
    check_open_rate(ch, rate)?;
    check_temperature(temperature)?;
    Engine::new(ch, out)?.classify(rate, temperature)
}

/// Phase of the finite-temperature minimum-conditional-entropy decoder.
pub fn universal_classify(
    ch: &Channel,
    out: &OutputDistribution,
    rate: f64,
    temperature: f64,
) -> Result<PhasePoint> {
    check_open_rate(ch, rate)?;
    check_temperature(temperature)?;
    Ok(Engine::new(ch, out)?.universal_classify(rate, temperature))
}

/// Classifies every `(R, T)` pair of a grid, rate-major, in parallel.
pub fn classify_grid(
    ch: &Channel,
    out: &OutputDistribution,
    decoder: Decoder,
    rates: &[f64],
    temperatures: &[f64],
) -> Result<Vec<PhasePoint>> {
    for &r in rates {
        check_open_rate(ch, r)?;
    }
    for &t in temperatures {
        check_temperature(t)?;
    }
    let engine = Engine::new(ch, out)?;
    let pairs: Vec<(f64, f64)> = rates
        .iter()
        .flat_map(|&r| temperatures.iter().map(move |&t| (r, t)))
        .collect();
    pairs
        .par_iter()
        .map(|&(r, t)| engine.point(decoder, r, t))
        .collect()
}

fn check_rate_grid(ch: &Channel, rates: &[f64]) -> Result<()> {
    for &r in rates {
        check_open_rate(ch, r).map_err(|_| {
            Error::InvalidGrid(format!("rate {r} outside (0, {})", ch.log_input_size()))
        })?;
    }
    if rates.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(
            "rate grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Samples a MAP phase boundary over a rate grid.
///
/// `ferro_para` covers the grid points below `I(X;Y)` and, when the grid
/// reaches past it, ends at the triple point. `ferro_glassy` is the vertical
/// segment `R = I(X;Y)` from `T = 1/β_max` up to `T_c(I)`.
pub fn boundary_curves(
    ch: &Channel,
    out: &OutputDistribution,
    kind: BoundaryKind,
    rates: &[f64],
) -> Result<BoundaryCurve> {
    check_rate_grid(ch, rates)?;
    let engine = Engine::new(ch, out)?;
    let fam = &engine.fam;
    let capacity = engine.mutual_information;
    let samples = match kind {
        BoundaryKind::GlassyPara => rates
            .par_iter()
            .map(|&r| Ok((r, 1.0 / fam.solve_beta_r(r)?.beta)))
            .collect::<Result<Vec<_>>>()?,
        BoundaryKind::FerroPara => {
            let mut pts = rates
                .par_iter()
                .filter(|&&r| r < capacity)
                .map(|&r| {
                    Ok((
                        r,
                        1.0 / beta_0_with(fam, capacity, engine.noise_entropy, r)?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            if has_triple_point(rates, capacity) {
                let b = beta_0_with(fam, capacity, engine.noise_entropy, capacity)?;
                pts.push((capacity, 1.0 / b));
            }
            pts
        }
        BoundaryKind::FerroGlassy => {
            if capacity > 0.0 {
                vec![
                    (capacity, 1.0 / BETA_MAX),
                    (capacity, 1.0 / fam.solve_beta_r(capacity)?.beta),
                ]
            } else {
                Vec::new()
            }
        }
    };
    Ok(BoundaryCurve { kind, samples })
}

/// The universal decoder's boundaries: `T = 1` (glassy–para), `T = I/R`
/// (ferro–para) and `R = I` for `T ≤ 1` (ferro–glassy).
pub fn universal_boundary_curves(
    ch: &Channel,
    kind: BoundaryKind,
    rates: &[f64],
) -> Result<BoundaryCurve> {
    check_rate_grid(ch, rates)?;
    let capacity = mutual_information_uniform(ch).mutual_information;
    let samples = match kind {
        BoundaryKind::GlassyPara => rates.iter().map(|&r| (r, 1.0)).collect(),
        BoundaryKind::FerroPara => {
            let mut pts: Vec<_> = rates
                .iter()
                .filter(|&&r| r < capacity)
                .map(|&r| (r, capacity / r))
                .collect();
            if has_triple_point(rates, capacity) {
                pts.push((capacity, 1.0));
            }
            pts
        }
        BoundaryKind::FerroGlassy => {
            if capacity > 0.0 {
                vec![(capacity, 1.0 / BETA_MAX), (capacity, 1.0)]
            } else {
                Vec::new()
            }
        }
    };
    Ok(BoundaryCurve { kind, samples })
}

fn has_triple_point(rates: &[f64], capacity: f64) -> bool {
    capacity > 0.0 && rates.last().is_some_and(|&r| r >= capacity)
}

/// Closed forms for the binary symmetric channel with uniform outputs.
pub mod bsc {
    use std::f64::consts::LN_2;

    use crate::channel::{binary_entropy, gv_distance_bsc};
    use crate::error::{Error, Result};
    use crate::numeric::bisect_first_true;

    use super::{BETA_0_FLOOR, BOUNDARY_TOL};
    use crate::gibbs::BETA_TOL;

    fn check_p(p: f64) -> Result<()> {
        if !(p > 0.0 && p < 0.5) {
            return Err(Error::OutOfRange {
                what: "crossover",
                value: p,
                lo: 0.0,
                hi: 0.5,
            });
        }
        Ok(())
    }

    /// `C = ln 2 - h(p)`.
    pub fn capacity(p: f64) -> Result<f64> {
        Ok(LN_2 - binary_entropy(p)?)
    }

    /// `F_g = δ_GV ln(1/p) + (1 - δ_GV) ln(1/(1-p))`.
    pub fn free_energy_glassy(p: f64, rate: f64) -> Result<f64> {
        check_p(p)?;
        let d = gv_distance_bsc(rate)?;
        Ok(-d * p.ln() - (1.0 - d) * (-p).ln_1p())
    }

    /// `F_p(β) = [ln 2 - R - ln(p^β + (1-p)^β)] / β`.
    pub fn free_energy_para(p: f64, beta: f64, rate: f64) -> Result<f64> {
        check_p(p)?;
        super::check_beta(beta)?;
        Ok((LN_2 - rate - log_tilt(p, beta)) / beta)
    }

    fn log_tilt(p: f64, beta: f64) -> f64 {
        let (a, b) = (beta * p.ln(), beta * (-p).ln_1p());
        b + (a - b).exp().ln_1p()
    }

    /// `β_c(R) = ln[(1-δ_GV)/δ_GV] / ln[(1-p)/p]`.
    pub fn beta_c(p: f64, rate: f64) -> Result<f64> {
        check_p(p)?;
        let d = gv_distance_bsc(rate)?;
        Ok(((1.0 - d) / d).ln() / ((1.0 - p) / p).ln())
    }

    /// Root of `β h(p) = ln 2 - R - ln(p^β + (1-p)^β)` on `(0, β_c]`.
    pub fn beta_0(p: f64, rate: f64) -> Result<f64> {
        let c = capacity(p)?;
        if rate > c + BOUNDARY_TOL {
            return Err(Error::AboveCapacity {
                rate,
                mutual_information: c,
            });
        }
        let hi = beta_c(p, rate)?;
        if (rate - c).abs() <= BOUNDARY_TOL {
            return Ok(hi);
        }
        let h = binary_entropy(p)?;
        // equals β (F_p(β) - h(p)), negative near 0 and positive at β_c
        let residual = |b: f64| LN_2 - rate - log_tilt(p, b) - b * h;
        let lo = BETA_0_FLOOR.min(hi);
        let (f_lo, f_hi) = (residual(lo), residual(hi));
        if !(f_lo < 0.0 && f_hi >= 0.0) {
            return Err(Error::NoRoot { lo, hi, f_lo, f_hi });
        }
        Ok(bisect_first_true(lo, hi, BETA_TOL, |b| residual(b) >= 0.0))
    }
}
