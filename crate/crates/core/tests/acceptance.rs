//! Acceptance checks. Each criterion prints one PASS or FAIL line with the
//! measured quantity, its tolerance and the runtime; the process exits
//! nonzero when any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::f64::consts::LN_2;
use std::time::{Duration, Instant};

use common::{h2, random_distribution, random_small_channel, rng};
use remcode::exponents::bsc as bsc_exp;
use remcode::gibbs::GibbsFamily;
use remcode::{
    beta_0, beta_c, classify, correct_decoding_exponent, empirical_free_energy,
    event_probabilities, free_energy_glassy, free_energy_para, gv_distance_bsc,
    mutual_information_uniform, optimize_rho, simulate, universal_boundary_curves,
    universal_classify, BoundaryKind, Channel, DistanceClass, ExponentAux, OutputDistribution,
    Phase, SimConfig, SimMode, SpectrumSample,
};
use statrs::distribution::{ChiSquared, ContinuousCDF};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn run(id: u32, name: &str, budget: Duration, check: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let out = check();
    let took = start.elapsed();
    let in_time = took <= budget;
    let pass = out.pass && in_time;
    println!(
        "{} criterion {id:>2} {name}: {} [runtime {:.2}s, budget {}s{}]",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        took.as_secs_f64(),
        budget.as_secs(),
        if in_time { "" } else { ", over budget" }
    );
    pass
}

fn bsc_capacity(p: f64) -> f64 {
    LN_2 - h2(p)
}

fn triple_point() -> Outcome {
    let p = 0.1;
    let ch = Channel::bsc(p).unwrap();
    let q = OutputDistribution::uniform(2);
    let c = bsc_capacity(p);
    let t_c = 1.0 / beta_c(&ch, &q, c).unwrap().beta;
    let t_0 = 1.0 / beta_0(&ch, &q, c).unwrap();
    let err = (t_c - 1.0).abs().max((t_0 - 1.0).abs());
    outcome(
        err < 1e-8,
        format!("C={c:.6} T_c(C)={t_c:.12} T_0(C)={t_0:.12} max|T-1|={err:.2e} tol 1e-8"),
    )
}

fn pinch_point() -> Outcome {
    let mut r = rng(0xACCE_0002);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let ch = random_small_channel(&mut r);
        let i = mutual_information_uniform(&ch).mutual_information;
        let b = beta_c(&ch, &ch.output_marginal(), i).unwrap().beta;
        worst = worst.max((b - 1.0).abs());
    }
    outcome(
        worst < 1e-7,
        format!("20 channels, max|β_c(I)-1|={worst:.2e} tol 1e-7"),
    )
}

fn correct_bsc() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in [0.05, 0.1, 0.2] {
        let ch = Channel::bsc(p).unwrap();
        let c = bsc_capacity(p);
        for k in 1..=10 {
            let rate = c + (LN_2 - c) * k as f64 / 11.0;
            let gv = gv_distance_bsc(rate).unwrap();
            let d = gv * (gv / p).ln() + (1.0 - gv) * ((1.0 - gv) / (1.0 - p)).ln();
            let got = correct_decoding_exponent(&ch, rate).unwrap().exponent;
            worst = worst.max((got - d).abs());
        }
    }
    outcome(
        worst < 1e-6,
        format!("30 (p,R) pairs, max|E_c - D(δ_GV||p)|={worst:.2e} tol 1e-6"),
    )
}

fn closed_form_crosscheck() -> Outcome {
    let mut r = rng(0xACCE_0004);
    let (mut worst, mut failures, mut total): (f64, usize, usize) = (0.0, 0, 0);
    let mut worst_case = String::new();
    for c in 0..20 {
        let ch = random_small_channel(&mut r);
        let i = mutual_information_uniform(&ch).mutual_information;
        let ln_x = ch.log_input_size();
        for k in 1..=5 {
            let rate = i + (ln_x - i) * k as f64 / 6.0;
            let res = correct_decoding_exponent(&ch, rate).unwrap();
            let gap = (res.exponent - res.crosscheck.unwrap()).abs();
            total += 1;
            if gap >= 1e-5 {
                failures += 1;
            }
            if gap > worst {
                worst = gap;
                worst_case = format!(
                    "channel {c} ({}x{}) R={rate:.4}",
                    ch.input_size(),
                    ch.output_size()
                );
            }
        }
    }
    outcome(
        failures == 0,
        format!("{failures}/{total} pairs off by >= 1e-5, max gap {worst:.2e} at {worst_case}; tol 1e-5"),
    )
}

/// `ρ*` from `p_β = δ_GV(R)` with `β = 1/(1+ρ)`, solved independently.
fn rho_star(p: f64, rate: f64) -> f64 {
    let gv = gv_distance_bsc(rate).unwrap();
    let tilted = |b: f64| p.powf(b) / (p.powf(b) + (1.0 - p).powf(b));
    if tilted(0.5) <= gv {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.5, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if tilted(mid) > gv {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    1.0 / (0.5 * (lo + hi)) - 1.0
}

fn error_bsc() -> Outcome {
    let mut worst_e: f64 = 0.0;
    let mut worst_boundary: f64 = 0.0;
    let mut rho_one_ok = true;
    for p in [0.05, 0.1, 0.2] {
        let ch = Channel::bsc(p).unwrap();
        let c = bsc_capacity(p);
        let r_crit = bsc_exp::critical_rate(p).unwrap();
        let sq = p.sqrt() / (p.sqrt() + (1.0 - p).sqrt());
        assert!((r_crit - (LN_2 - h2(sq))).abs() < 1e-12);
        for k in 0..20 {
            let rate = c * k as f64 / 20.0;
            let res = optimize_rho(&ch, rate).unwrap();
            let ExponentAux::Error { rho, beta } = res.aux else {
                unreachable!()
            };
            let star = rho_star(p, rate);
            let s = 1.0 + star;
            let e0 = star * LN_2 - s * (p.powf(1.0 / s) + (1.0 - p).powf(1.0 / s)).ln();
            worst_e = worst_e.max((res.exponent - (e0 - star * rate)).abs());
            if rate <= r_crit {
                rho_one_ok &= rho == 1.0;
            } else {
                let p_beta = p.powf(beta) / (p.powf(beta) + (1.0 - p).powf(beta));
                worst_boundary =
                    worst_boundary.max((p_beta - gv_distance_bsc(rate).unwrap()).abs());
            }
        }
    }
    outcome(
        worst_e < 1e-8 && rho_one_ok && worst_boundary < 1e-6,
        format!(
            "max|E - (E0(ρ*)-ρ*R)|={worst_e:.2e} tol 1e-8; ρ*=1 below R_crit: {rho_one_ok}; \
             max|p_β* - δ_GV|={worst_boundary:.2e} tol 1e-6"
        ),
    )
}

fn concentration() -> Outcome {
    let (p, n, trials, rate) = (0.1, 2000, 200, 0.3);
    let ch = Channel::bsc(p).unwrap();
    let q = OutputDistribution::uniform(2);
    let cfg = |beta: f64| {
        let mut c = SimConfig::new(ch.clone(), n, rate, beta, SimMode::BscSpectrum);
        c.seed = 6;
        c
    };
    let fg = free_energy_glassy(&ch, &q, rate).unwrap();
    let cold = empirical_free_energy(&cfg(3.0), trials).unwrap();
    let rel_cold = (cold.mean - fg).abs() / fg;
    let fp = free_energy_para(&ch, &q, 0.5, rate).unwrap();
    let hot = empirical_free_energy(&cfg(0.5), trials).unwrap();
    let rel_hot = (hot.mean - fp).abs() / fp;
    let bc = beta_c(&ch, &q, rate).unwrap().beta;
    let crit = empirical_free_energy(&cfg(bc), trials).unwrap();
    let fp_c = free_energy_para(&ch, &q, bc, rate).unwrap();
    let band = 3.0 * crit.std_dev;
    let inside = (crit.mean - fg).abs() <= band && (crit.mean - fp_c).abs() <= band;
    let inside_stderr = (crit.mean - fg).abs() <= 3.0 * crit.stderr
        && (crit.mean - fp_c).abs() <= 3.0 * crit.stderr;
    outcome(
        rel_cold < 0.05 && rel_hot < 0.05 && inside,
        format!(
            "β=3 rel err {rel_cold:.2e}, β=0.5 rel err {rel_hot:.2e} (tol 5%); β_c={bc:.6} mean {:.6} vs F_g {fg:.6}, \
             F_p(β_c) {fp_c:.6}, 3σ band ±{band:.2e} inside={inside} (3·stderr band ±{:.2e} inside={inside_stderr})",
            crit.mean,
            3.0 * crit.stderr
        ),
    )
}

fn exponential_rate() -> Outcome {
    let (p, rate, delta, eps, trials) = (0.1, 0.3, 0.02, 0.1, 100_000);
    let mut points = Vec::new();
    let mut freqs = Vec::new();
    let mut b_hits_60 = usize::MAX;
    for n in (20..=60).step_by(8) {
        let mut cfg = SimConfig::new(Channel::bsc(p).unwrap(), n, rate, 1.0, SimMode::BscSpectrum);
        cfg.seed = 7;
        let k = (delta * n as f64).round() as usize;
        let report = event_probabilities(&cfg, eps, trials).unwrap();
        let entry = report
            .populated
            .iter()
            .find(|e| e.hamming == Some(k))
            .unwrap();
        points.push((n as f64, entry.log_prob_exact.unwrap()));
        freqs.push(format!("n={n}:{}", entry.hits));
        if n == 60 {
            b_hits_60 = report.b_hits;
        }
    }
    let m = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let slope = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / points.iter().map(|(x, _)| (x - mx).powi(2)).sum::<f64>();
    let target = -(LN_2 - rate - h2(delta));
    let rel = (slope - target).abs() / target.abs();
    outcome(
        rel < 0.15 && b_hits_60 == 0,
        format!(
            "slope {slope:.4} vs {target:.4} rel {rel:.3} (tol 0.15); hits per 1e5 [{}]; event B hits at n=60: {b_hits_60}",
            freqs.join(" ")
        ),
    )
}

fn concavity() -> Outcome {
    let mut r = rng(0xACCE_0008);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..50 {
        let ch = random_small_channel(&mut r);
        let q = random_distribution(&mut r, ch.output_size());
        let beta = 0.05 + 5.0 * rand::Rng::random::<f64>(&mut r);
        let fam = GibbsFamily::new(&ch, &q).unwrap();
        let grid: Vec<f64> = (0..=10)
            .map(|i| ch.log_input_size() * i as f64 / 10.0)
            .collect();
        let j: Vec<f64> = grid.iter().map(|&rr| fam.j(beta, rr).unwrap()).collect();
        for a in 0..grid.len() {
            for b in a + 1..grid.len() {
                let mid = fam.j(beta, 0.5 * (grid[a] + grid[b])).unwrap();
                worst = worst.max(0.5 * (j[a] + j[b]) - mid);
            }
        }
    }
    outcome(
        worst <= 1e-9,
        format!("50 triples, max chord excess {worst:.2e} tol 1e-9"),
    )
}

fn universal_vs_map() -> Outcome {
    let mut r = rng(0xACCE_0009);
    let mut non_ferro = 0;
    let mut universal_ok = true;
    for _ in 0..5 {
        let ch = random_small_channel(&mut r);
        let q = ch.output_marginal();
        let i = mutual_information_uniform(&ch).mutual_information;
        for k in 1..=100 {
            let beta = k as f64 / 100.0;
            if classify(&ch, &q, beta * i, 1.0 / beta).unwrap().phase != Phase::Ferromagnetic {
                non_ferro += 1;
            }
        }
        let rates: Vec<f64> = (1..50)
            .map(|k| ch.log_input_size() * k as f64 / 50.0)
            .collect();
        let curve = universal_boundary_curves(&ch, BoundaryKind::GlassyPara, &rates).unwrap();
        universal_ok &= curve.samples.iter().all(|&(_, t)| t == 1.0);
        for &rate in rates.iter().filter(|&&rr| rr > i) {
            universal_ok &=
                universal_classify(&ch, &q, rate, 0.999).unwrap().phase == Phase::Glassy;
            universal_ok &=
                universal_classify(&ch, &q, rate, 1.001).unwrap().phase == Phase::Paramagnetic;
        }
    }
    outcome(
        non_ferro == 0 && universal_ok,
        format!("non-ferromagnetic MAP points on R=βI: {non_ferro}/500; universal T_c = 1: {universal_ok}"),
    )
}

fn hamming_counts(s: &SpectrumSample) -> BTreeMap<usize, u64> {
    let mut out = BTreeMap::new();
    for b in &s.spectrum {
        let k = match &b.class {
            DistanceClass::Hamming(k) => *k,
            DistanceClass::JointType(t) => (t[1] + t[2]) as usize,
        };
        *out.entry(k).or_insert(0) += b.count.unwrap();
    }
    out
}

/// Two-sample chi-square homogeneity test; sparse cells are pooled until
/// every pooled cell holds at least 10 observations.
fn homogeneity(a: &[u64], b: &[u64]) -> (f64, usize) {
    let mut hist: BTreeMap<u64, (f64, f64)> = BTreeMap::new();
    a.iter()
        .for_each(|&v| hist.entry(v).or_insert((0.0, 0.0)).0 += 1.0);
    b.iter()
        .for_each(|&v| hist.entry(v).or_insert((0.0, 0.0)).1 += 1.0);
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (_, (x, y)) in hist {
        acc = (acc.0 + x, acc.1 + y);
        if acc.0 + acc.1 >= 10.0 {
            cells.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 + acc.1 > 0.0 {
        match cells.last_mut() {
            Some(last) => *last = (last.0 + acc.0, last.1 + acc.1),
            None => cells.push(acc),
        }
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let stat: f64 = cells
        .iter()
        .map(|&(x, y)| {
            let tot = x + y;
            let (ea, eb) = (tot * na / (na + nb), tot * nb / (na + nb));
            (x - ea).powi(2) / ea + (y - eb).powi(2) / eb
        })
        .sum();
    let df = cells.len().saturating_sub(1);
    if df == 0 {
        return (1.0, 0);
    }
    (1.0 - ChiSquared::new(df as f64).unwrap().cdf(stat), df)
}

fn mode_equivalence() -> Outcome {
    let (n, samples) = (12, 10_000);
    let rate = 64f64.ln() / n as f64;
    let ch = Channel::bsc(0.1).unwrap();
    let draw = |mode: SimMode, seed: u64| {
        let mut cfg = SimConfig::new(ch.clone(), n, rate, 1.0, mode);
        cfg.seed = seed;
        assert_eq!(cfg.m_exact(), Some(64));
        simulate(&cfg, samples)
            .unwrap()
            .iter()
            .map(hamming_counts)
            .collect::<Vec<_>>()
    };
    let enumerated = draw(SimMode::Enumerate, 10);
    let sampled = draw(SimMode::BscSpectrum, 11);
    let d_min = |v: &[BTreeMap<usize, u64>]| {
        v.iter()
            .map(|m| *m.keys().next().unwrap() as u64)
            .collect::<Vec<_>>()
    };
    let at = |v: &[BTreeMap<usize, u64>], k: usize| {
        v.iter()
            .map(|m| m.get(&k).copied().unwrap_or(0))
            .collect::<Vec<_>>()
    };
    let (p_min, df_min) = homogeneity(&d_min(&enumerated), &d_min(&sampled));
    let (p_mid, df_mid) = homogeneity(&at(&enumerated, 6), &at(&sampled, 6));
    let (p_low, df_low) = homogeneity(&at(&enumerated, 3), &at(&sampled, 3));
    let worst = p_min.min(p_mid).min(p_low);
    outcome(
        worst > 0.01,
        format!(
            "p-values: d_min {p_min:.3} (df {df_min}), N(6) {p_mid:.3} (df {df_mid}), N(3) {p_low:.3} (df {df_low}); threshold 0.01"
        ),
    )
}

fn main() {
    let s = Duration::from_secs;
    let results = [
        run(1, "BSC triple point", s(1), triple_point),
        run(2, "general-channel pinch point", s(10), pinch_point),
        run(3, "correct-decoding exponent, BSC", s(30), correct_bsc),
        run(4, "closed-form crosscheck", s(120), closed_form_crosscheck),
        run(5, "error exponent, BSC", s(30), error_bsc),
        run(6, "free-energy concentration", s(120), concentration),
        run(
            7,
            "exponential rate of populated distances",
            s(180),
            exponential_rate,
        ),
        run(8, "concavity of J in R", s(30), concavity),
        run(9, "universal vs MAP diagram", s(30), universal_vs_map),
        run(10, "sampler mode equivalence", s(120), mode_equivalence),
    ];
    let failed = results.iter().filter(|&&ok| !ok).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
