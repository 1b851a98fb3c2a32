mod common;

use common::{random_distribution, random_small_channel, rng};
use proptest::prelude::*;
use remcode::numeric::log_add_exp;
use remcode::{
    beta_c, classify, correct_decoding_exponent, error_exponent, free_energy_glassy,
    free_energy_para, gv_distance_bsc, mutual_information_uniform, optimize_rho, sample_spectrum,
    universal_classify, Channel, GibbsFamily, OutputDistribution, Phase, SimConfig, SimMode,
};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 32,
        ..ProptestConfig::default()
    }
}

fn setup(seed: u64) -> (Channel, OutputDistribution) {
    let mut r = rng(seed);
    let ch = random_small_channel(&mut r);
    let q = random_distribution(&mut r, ch.output_size());
    (ch, q)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn gibbs_entropy_and_distortion_nonincreasing(seed in any::<u64>()) {
        let (ch, q) = setup(seed);
        let fam = GibbsFamily::new(&ch, &q).unwrap();
        let mut prev = fam.averages(0.0);
        for i in 1..=200 {
            let cur = fam.averages(i as f64 * 0.1);
            prop_assert!(cur.entropy <= prev.entropy + 1e-12);
            prop_assert!(cur.distortion <= prev.distortion + 1e-12);
            prev = cur;
        }
    }

    #[test]
    fn gibbs_columns_are_normalized(seed in any::<u64>(), beta in 0.0f64..50.0) {
        let (ch, q) = setup(seed);
        let state = GibbsFamily::new(&ch, &q).unwrap().state(beta);
        for y in 0..ch.output_size() {
            let s: f64 = state.q_beta.column(y).iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
        prop_assert!(state.h_cond <= ch.log_input_size() + 1e-12 && state.h_cond >= -1e-12);
    }

    #[test]
    fn j_is_concave_in_rate(seed in any::<u64>(), beta in 0.05f64..5.0, a in 0.0f64..1.0, b in 0.0f64..1.0, w in 0.0f64..1.0) {
        let (ch, q) = setup(seed);
        let fam = GibbsFamily::new(&ch, &q).unwrap();
        let ln_x = ch.log_input_size();
        let (r1, r2) = (a * ln_x, b * ln_x);
        let mid = fam.j(beta, w * r1 + (1.0 - w) * r2).unwrap();
        let chord = w * fam.j(beta, r1).unwrap() + (1.0 - w) * fam.j(beta, r2).unwrap();
        prop_assert!(mid >= chord - 1e-9, "{mid} < {chord}");
    }

    #[test]
    fn j_branches_meet_at_the_gibbs_rate(seed in any::<u64>(), beta in 0.05f64..5.0) {
        let (ch, q) = setup(seed);
        let fam = GibbsFamily::new(&ch, &q).unwrap();
        let avg = fam.averages(beta);
        let rate = ch.log_input_size() - avg.entropy;
        let free = avg.entropy - beta * avg.distortion;
        let root = fam.solve_beta_r(rate).unwrap();
        let bound = ch.log_input_size() - rate - beta * fam.averages(root.beta).distortion;
        prop_assert!((free - bound).abs() < 1e-9);
        prop_assert!((fam.j(beta, rate).unwrap() - free).abs() < 1e-9);
    }

    #[test]
    fn para_meets_glassy_at_beta_c(seed in any::<u64>(), frac in 0.02f64..0.98) {
        let (ch, q) = setup(seed);
        let rate = frac * ch.log_input_size();
        let root = beta_c(&ch, &q, rate).unwrap();
        prop_assume!(!root.saturated);
        let fp = free_energy_para(&ch, &q, root.beta, rate).unwrap();
        let fg = free_energy_glassy(&ch, &q, rate).unwrap();
        prop_assert!((fp - fg).abs() < 1e-8, "{fp} vs {fg}");
    }

    #[test]
    fn critical_temperature_nonincreasing(seed in any::<u64>()) {
        let (ch, q) = setup(seed);
        let ln_x = ch.log_input_size();
        let mut prev = f64::INFINITY;
        for i in 1..40 {
            let t_c = 1.0 / beta_c(&ch, &q, ln_x * i as f64 / 40.0).unwrap().beta;
            prop_assert!(t_c <= prev + 1e-9);
            prev = t_c;
        }
    }

    #[test]
    fn classification_follows_free_energies(seed in any::<u64>(), frac in 0.02f64..0.98, t in 0.05f64..4.0) {
        let (ch, _) = setup(seed);
        let q = ch.output_marginal();
        let rate = frac * ch.log_input_size();
        let info = mutual_information_uniform(&ch);
        let pt = classify(&ch, &q, rate, t).unwrap();
        let bc = beta_c(&ch, &q, rate).unwrap().beta;
        let incorrect = if 1.0 / t >= bc { pt.f_glassy } else { pt.f_para };
        prop_assert_eq!(pt.f_incorrect, incorrect);
        let disordered = if 1.0 / t >= bc { Phase::Glassy } else { Phase::Paramagnetic };
        let expected = if rate <= info.mutual_information + 1e-9 && pt.f_ferro <= incorrect + 1e-9 {
            Phase::Ferromagnetic
        } else {
            disordered
        };
        prop_assert_eq!(pt.phase, expected);
    }

    #[test]
    fn universal_decodable_points_are_map_decodable(seed in any::<u64>(), beta in 0.01f64..=1.0) {
        let (ch, _) = setup(seed);
        let q = ch.output_marginal();
        let rate = beta * mutual_information_uniform(&ch).mutual_information;
        prop_assume!(rate > 1e-6);
        prop_assert_eq!(classify(&ch, &q, rate, 1.0 / beta).unwrap().phase, Phase::Ferromagnetic);
    }

    #[test]
    fn universal_critical_temperature_is_one(seed in any::<u64>(), frac in 0.02f64..0.98) {
        let (ch, q) = setup(seed);
        let rate = frac * ch.log_input_size();
        let cold = universal_classify(&ch, &q, rate, 0.999).unwrap();
        let hot = universal_classify(&ch, &q, rate, 1.001).unwrap();
        if cold.phase != Phase::Ferromagnetic {
            prop_assert_eq!(cold.phase, Phase::Glassy);
        }
        if hot.phase != Phase::Ferromagnetic {
            prop_assert_eq!(hot.phase, Phase::Paramagnetic);
        }
    }

    #[test]
    fn error_exponent_nonincreasing_in_rate(seed in any::<u64>(), rho in 0.0f64..=1.0) {
        let (ch, _) = setup(seed);
        let i = mutual_information_uniform(&ch).mutual_information;
        let mut prev = f64::INFINITY;
        for k in 0..=10 {
            let e = error_exponent(&ch, i * k as f64 / 10.0, rho).unwrap();
            prop_assert!(e <= prev + 1e-12);
            prev = e;
        }
    }

    #[test]
    fn exponents_are_nonnegative(seed in any::<u64>(), frac in 0.01f64..0.99) {
        let (ch, _) = setup(seed);
        let i = mutual_information_uniform(&ch).mutual_information;
        let ln_x = ch.log_input_size();
        prop_assert!(optimize_rho(&ch, frac * i).unwrap().exponent >= -1e-9);
        let above = i + frac * (ln_x - i);
        prop_assume!(above > i + 1e-6);
        prop_assert!(correct_decoding_exponent(&ch, above).unwrap().exponent >= -1e-9);
    }

    #[test]
    fn bsc_crosscheck_is_exact(p in 0.01f64..0.3, frac in 0.05f64..0.95) {
        let ch = Channel::bsc(p).unwrap();
        let c = mutual_information_uniform(&ch).mutual_information;
        let rate = c + frac * (std::f64::consts::LN_2 - c);
        let res = correct_decoding_exponent(&ch, rate).unwrap();
        prop_assert!((res.exponent - res.crosscheck.unwrap()).abs() < 1e-6);
    }

    #[test]
    fn gv_distance_decreasing(a in 0.001f64..0.69, b in 0.001f64..0.69) {
        prop_assume!((a - b).abs() > 1e-6);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(gv_distance_bsc(lo).unwrap() > gv_distance_bsc(hi).unwrap());
    }

    #[test]
    fn spectrum_mass_and_determinism(seed in any::<u64>(), trial in 0u64..1000, n in 4usize..9) {
        let (ch, _) = setup(seed);
        let mut cfg = SimConfig::new(ch, n, 0.4, 1.0, SimMode::Enumerate);
        cfg.seed = seed;
        let a = sample_spectrum(&cfg, trial).unwrap();
        let total: u64 = a.spectrum.iter().map(|b| b.count.unwrap()).sum();
        prop_assert_eq!(total, cfg.m_exact().unwrap() - 1);
        prop_assert!((a.z_total - log_add_exp(a.z_correct, a.z_error)).abs() < 1e-12);
        prop_assert_eq!(a, sample_spectrum(&cfg, trial).unwrap());
    }

    #[test]
    fn bsc_spectrum_mass(seed in any::<u64>(), n in 5usize..200, rate in 0.05f64..0.69) {
        let mut cfg = SimConfig::new(Channel::bsc(0.1).unwrap(), n, rate, 1.0, SimMode::BscSpectrum);
        cfg.seed = seed;
        let s = sample_spectrum(&cfg, 0).unwrap();
        match cfg.m_exact() {
            Some(m) => {
                let total: u64 = s.spectrum.iter().map(|b| b.count.unwrap()).sum();
                prop_assert_eq!(total, m - 1);
            }
            None => prop_assert!((s.log_total() - cfg.log_m()).abs() < 1e-6),
        }
    }
}
