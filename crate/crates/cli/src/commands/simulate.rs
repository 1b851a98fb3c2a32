use remcode::rem_sim::{event_report, free_energy_summary, rank_summary};
use remcode::{
    beta_c, classify, free_energy_glassy, free_energy_para, simulate, SimConfig, SimMode,
};
use serde_json::json;

use crate::args::SimulateArgs;
use crate::error::{CliError, CliResult};
use crate::output::{ensure_dir, fmt_num, fmt_opt, write_json_lines, CsvOut, RunManifest};

pub const SUMMARY_SCHEMA: &str = "remcode.simulation_summary.v1";
pub const POPULATED_SCHEMA: &str = "remcode.populated_distances.v1";

pub fn run(args: SimulateArgs, argv: Vec<String>) -> CliResult<()> {
    let ch = args.source.load()?;
    let mode = match args.mode {
        Some(m) => SimMode::from(m),
        None if ch.bsc_crossover().is_some() => SimMode::BscSpectrum,
        None => SimMode::Enumerate,
    };
    if args.trials == 0 {
        return Err(CliError::Infeasible("--trials must be positive".into()));
    }
    if !(args.epsilon > 0.0 && args.epsilon.is_finite()) {
        return Err(CliError::Infeasible(format!(
            "--epsilon must be positive, got {}",
            args.epsilon
        )));
    }
    let mut cfg = SimConfig::new(ch.clone(), args.n, args.rate, args.beta, mode);
    cfg.trials = args.trials;
    cfg.seed = args.seed;
    cfg.include_correct = args.include_correct;
    cfg.validate()?;

    let samples = simulate(&cfg, args.trials)?;
    let free = free_energy_summary(&samples)?;
    let ranks = rank_summary(&cfg, &samples).ok();
    let events = event_report(&cfg, &samples, args.epsilon)?;

    // theory at the channel's output marginal; absent outside its domain
    let q = ch.output_marginal();
    let f_glassy = free_energy_glassy(&ch, &q, args.rate).ok();
    let f_para = free_energy_para(&ch, &q, args.beta, args.rate).ok();
    let b_c = beta_c(&ch, &q, args.rate).ok().map(|b| b.beta);
    let f_theory = match (b_c, f_glassy, f_para) {
        (Some(b), Some(g), _) if args.beta >= b => Some(g),
        (Some(_), _, Some(p)) => Some(p),
        _ => None,
    };
    let phase = classify(&ch, &q, args.rate, 1.0 / args.beta)
        .map(|p| p.phase.to_string())
        .unwrap_or_default();

    let resolved = json!({
        "channel": args.source.describe(&ch),
        "mode": mode.to_string(),
        "n": args.n,
        "rate": args.rate,
        "beta": args.beta,
        "trials": args.trials,
        "epsilon": args.epsilon,
        "include_correct": args.include_correct,
    });
    let manifest = RunManifest::new("simulate", super::parameters(resolved, argv), args.seed);
    ensure_dir(&args.out)?;

    let trials_path = args.out.join("trials.jsonl");
    write_json_lines(&trials_path, &samples)?;

    let columns = [
        "mode",
        "n",
        "rate",
        "beta",
        "trials",
        "seed",
        "log_m",
        "f_mean",
        "f_stderr",
        "f_std",
        "f_glassy",
        "f_para",
        "f_theory",
        "beta_c",
        "phase",
        "mean_log_rank",
        "median_rank",
        "rank_reference",
        "epsilon",
        "event_b_hits",
        "pr_event_b",
        "log_pr_event_b_theory",
    ];
    let mut csv = CsvOut::create(
        args.out.join("summary.csv"),
        SUMMARY_SCHEMA,
        &manifest,
        &columns,
    )?;
    csv.row([
        mode.to_string(),
        args.n.to_string(),
        fmt_num(args.rate),
        fmt_num(args.beta),
        args.trials.to_string(),
        args.seed.to_string(),
        fmt_num(cfg.log_m()),
        fmt_num(free.mean),
        fmt_num(free.stderr),
        fmt_num(free.std_dev),
        fmt_opt(f_glassy),
        fmt_opt(f_para),
        fmt_opt(f_theory),
        fmt_opt(b_c),
        phase,
        fmt_opt(ranks.as_ref().map(|r| r.mean_log_rank)),
        fmt_opt(ranks.as_ref().map(|r| r.median)),
        fmt_opt(ranks.as_ref().map(|r| r.reference)),
        fmt_num(args.epsilon),
        events.b_hits.to_string(),
        fmt_num(events.pr_b),
        fmt_num(events.log_pr_b_theory),
    ])?;
    let summary_path = csv.finish()?;

    let mut csv = CsvOut::create(
        args.out.join("populated.csv"),
        POPULATED_SCHEMA,
        &manifest,
        &[
            "distance",
            "hamming",
            "hits",
            "frequency",
            "log_prob_exact",
            "log_rate_theory",
        ],
    )?;
    for p in &events.populated {
        csv.row([
            fmt_num(p.distance),
            p.hamming.map(|k| k.to_string()).unwrap_or_default(),
            p.hits.to_string(),
            fmt_num(p.frequency),
            fmt_opt(p.log_prob_exact),
            fmt_num(p.log_rate_theory),
        ])?;
    }
    let populated_path = csv.finish()?;
    let manifest_path = manifest.write(&args.out)?;
    for p in [trials_path, summary_path, populated_path, manifest_path] {
        println!("{}", p.display());
    }
    Ok(())
}
