//! Maximization of smooth functions over the probability simplex by
//! multistart projected-gradient ascent with Armijo backtracking.
//!
//! Starts are the uniform point, one point next to each vertex and seeded
//! Dirichlet draws. When the starts disagree on a small simplex the best
//! point of a dense grid is polished as well.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

use crate::error::{Error, Result};

pub trait SimplexObjective: Sync {
    /// Objective value, `-inf` where undefined.
    fn value(&self, q: &[f64]) -> f64;
    fn gradient(&self, q: &[f64]) -> Vec<f64>;
}

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    pub starts: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Grid resolution `1/k` of the fallback search.
    pub grid_resolution: usize,
    /// Largest dimension for which the grid fallback is allowed.
    pub grid_max_dim: usize,
    /// Spread of start values that triggers the fallback.
    pub agreement_tol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            starts: 20,
            seed: 0x5EED,
            max_iter: 4000,
            grid_resolution: 400,
            grid_max_dim: 3,
            agreement_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOptimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub used_grid: bool,
}

const VERTEX_MIX: f64 = 1e-3;
const TIE_TOL: f64 = 1e-13;
const ARMIJO: f64 = 1e-4;

/// Euclidean projection onto `{q : q ≥ 0, Σ q = 1}`.
pub fn project(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cumulative += ui;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    let mut q: Vec<f64> = v.iter().map(|&x| (x - theta).max(0.0)).collect();
    let s: f64 = q.iter().sum();
    q.iter_mut().for_each(|x| *x /= s);
    q
}

fn start_points(dim: usize, opts: &SimplexOptions) -> Vec<Vec<f64>> {
    let uniform = vec![1.0 / dim as f64; dim];
    let mut starts = vec![uniform.clone()];
    for y in 0..dim.min(opts.starts.saturating_sub(1)) {
        let mut v: Vec<f64> = uniform.iter().map(|u| VERTEX_MIX * u).collect();
        v[y] += 1.0 - VERTEX_MIX;
        starts.push(v);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let gamma = Gamma::new(1.0, 1.0).expect("unit gamma");
    while starts.len() < opts.starts.max(1) {
        let draw: Vec<f64> = (0..dim).map(|_| gamma.sample(&mut rng)).collect();
        let s: f64 = draw.iter().sum();
        starts.push(draw.iter().map(|x| x / s).collect());
    }
    starts
}

/// Projected-gradient ascent from a single start.
pub fn ascend(obj: &dyn SimplexObjective, start: &[f64], max_iter: usize) -> (Vec<f64>, f64) {
    let mut x = project(start);
    let mut fx = obj.value(&x);
    if !fx.is_finite() {
        return (x, fx);
    }
    let mut step = 0.1;
    let mut quiet = 0;
    for _ in 0..max_iter {
        let g = obj.gradient(&x);
        let mut accepted = None;
        while step > 1e-18 {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + step * b).collect();
            let cand = project(&trial);
            let fc = obj.value(&cand);
            let slope: f64 = g
                .iter()
                .zip(cand.iter().zip(&x))
                .map(|(gi, (c, xi))| gi * (c - xi))
                .sum();
            if fc.is_finite() && fc >= fx + ARMIJO * slope {
                accepted = Some((cand, fc));
                break;
            }
            step *= 0.5;
        }
        let Some((cand, fc)) = accepted else { break };
        let moved = cand
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let gain = fc - fx;
        x = cand;
        fx = fc;
        if moved < 1e-14 || gain <= 1e-16 * fx.abs().max(1.0) {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
        step = (step * 2.0).min(1e3);
    }
    (x, fx)
}

fn better(a: &(Vec<f64>, f64), b: &(Vec<f64>, f64)) -> bool {
    if !b.1.is_finite() {
        return a.1.is_finite();
    }
    if !a.1.is_finite() {
        return false;
    }
    if (a.1 - b.1).abs() <= TIE_TOL {
        return a
            .0
            .iter()
            .zip(&b.0)
            .find(|(x, y)| x != y)
            .is_some_and(|(x, y)| x < y);
    }
    a.1 > b.1
}

fn grid_points(dim: usize, k: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut counts = vec![0usize; dim];
    fn rec(i: usize, left: usize, k: usize, counts: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if i + 1 == counts.len() {
            counts[i] = left;
            out.push(counts.iter().map(|&c| c as f64 / k as f64).collect());
            return;
        }
        for c in 0..=left {
            counts[i] = c;
            rec(i + 1, left - c, k, counts, out);
        }
    }
    rec(0, k, k, &mut counts, &mut out);
    out
}

/// Maximizes `obj` over the `dim`-simplex.
pub fn maximize(
    obj: &dyn SimplexObjective,
    dim: usize,
    opts: &SimplexOptions,
) -> Result<SimplexOptimum> {
    if dim == 0 {
        return Err(Error::Optimization("empty simplex".into()));
    }
    if dim == 1 {
        let value = obj.value(&[1.0]);
        return Ok(SimplexOptimum {
            point: vec![1.0],
            value,
            used_grid: false,
        });
    }
    let runs: Vec<(Vec<f64>, f64)> = start_points(dim, opts)
        .par_iter()
        .map(|s| ascend(obj, s, opts.max_iter))
        .collect();
    let finite: Vec<f64> = runs.iter().map(|r| r.1).filter(|v| v.is_finite()).collect();
    let spread = if finite.is_empty() {
        f64::INFINITY
    } else {
        finite.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            - finite.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let mut best = runs[0].clone();
    for r in &runs[1..] {
        if better(r, &best) {
            best = r.clone();
        }
    }
    let mut used_grid = false;
    if spread > opts.agreement_tol && dim <= opts.grid_max_dim {
        used_grid = true;
        let grid = grid_points(dim, opts.grid_resolution);
        let seed = grid
            .par_iter()
            .map(|q| (q.clone(), obj.value(q)))
            .reduce_with(|a, b| if better(&b, &a) { b } else { a })
            .expect("nonempty grid");
        if seed.1.is_finite() {
            let polished = ascend(obj, &seed.0, opts.max_iter);
            for cand in [seed, polished] {
                if better(&cand, &best) {
                    best = cand;
                }
            }
        }
    }
    if !best.1.is_finite() {
        return Err(Error::Optimization(
            "objective is undefined at every start".into(),
        ));
    }
    Ok(SimplexOptimum {
        point: best.0,
        value: best.1,
        used_grid,
    })
}
