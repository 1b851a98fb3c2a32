use rayon::prelude::*;
use remcode::exponents::{bsc, error_exponent_detail};
use remcode::{
    binary_divergence, correct_decoding_exponent, gv_distance_bsc, mutual_information_uniform,
    optimize_rho, Channel, ExponentAux, ExponentResult,
};
use serde_json::json;

use crate::args::{ExponentArgs, ExponentKind};
use crate::error::{CliError, CliResult};
use crate::grid::Grid;
use crate::output::{ensure_dir, fmt_num, fmt_opt, CsvOut, RunManifest};

pub const CORRECT_SCHEMA: &str = "remcode.exponents.correct.v1";
pub const ERROR_SCHEMA: &str = "remcode.exponents.error.v1";
const OPTIMIZER_SEED: u64 = 0x5EED;

fn default_grid(kind: ExponentKind, capacity: f64, ln_x: f64) -> Grid {
    match kind {
        ExponentKind::Correct => Grid::new(capacity + 0.01 * (ln_x - capacity), ln_x, 50),
        ExponentKind::Error => Grid::new(0.0, capacity, 50),
    }
}

fn offending(kind: ExponentKind, rates: &[f64], capacity: f64, ln_x: f64) -> Vec<f64> {
    rates
        .iter()
        .copied()
        .filter(|&r| match kind {
            ExponentKind::Correct => !(r > capacity && r <= ln_x),
            ExponentKind::Error => !(r >= 0.0 && r <= capacity + 1e-12),
        })
        .collect()
}

/// The BSC closed forms: `D(δ_GV(R) || p)` above capacity, and below it
/// `E_0(1) - R` up to the critical rate and `D(δ_GV(R) || p)` beyond.
fn closed_form(ch: &Channel, kind: ExponentKind, rate: f64, rho: Option<f64>) -> Option<f64> {
    let p = ch.bsc_crossover()?;
    match (kind, rho) {
        (ExponentKind::Correct, _) => bsc::correct_exponent(p, rate).ok(),
        (ExponentKind::Error, Some(rho)) => Some(bsc::e0(p, rho) - rho * rate),
        (ExponentKind::Error, None) => {
            if rate <= bsc::critical_rate(p).ok()? {
                Some(bsc::e0(p, 1.0) - rate)
            } else {
                binary_divergence(gv_distance_bsc(rate).ok()?, p).ok()
            }
        }
    }
}

pub fn run(args: ExponentArgs, argv: Vec<String>) -> CliResult<()> {
    let ch = args.source.load()?;
    if args.rho.is_some() && args.kind == ExponentKind::Correct {
        return Err(CliError::Input("--rho applies to --kind error only".into()));
    }
    if let Some(rho) = args.rho {
        if !(0.0..=1.0).contains(&rho) {
            return Err(CliError::Infeasible(format!("rho = {rho} outside [0, 1]")));
        }
    }
    let capacity = mutual_information_uniform(&ch).mutual_information;
    let ln_x = ch.log_input_size();
    let grid = args
        .rate_grid
        .unwrap_or(default_grid(args.kind, capacity, ln_x));
    let rates = grid.points();
    if rates.is_empty() {
        return Err(CliError::Infeasible("rate grid is empty".into()));
    }
    let bad = offending(args.kind, &rates, capacity, ln_x);
    if !bad.is_empty() {
        let listed: Vec<String> = bad.iter().map(|&r| fmt_num(r)).collect();
        let side = match args.kind {
            ExponentKind::Correct => format!(
                "(I(X;Y), ln|X|] = ({}, {}]",
                fmt_num(capacity),
                fmt_num(ln_x)
            ),
            ExponentKind::Error => format!("[0, I(X;Y)] = [0, {}]", fmt_num(capacity)),
        };
        return Err(CliError::Infeasible(format!(
            "rates outside {side}: {}",
            listed.join(", ")
        )));
    }

    let results = rates
        .par_iter()
        .map(|&r| match (args.kind, args.rho) {
            (ExponentKind::Correct, _) => correct_decoding_exponent(&ch, r),
            (ExponentKind::Error, Some(rho)) => error_exponent_detail(&ch, r, rho),
            (ExponentKind::Error, None) => optimize_rho(&ch, r),
        })
        .collect::<remcode::Result<Vec<ExponentResult>>>()?;

    let kind_name = match args.kind {
        ExponentKind::Correct => "correct",
        ExponentKind::Error => "error",
    };
    let resolved = json!({
        "channel": args.source.describe(&ch),
        "kind": kind_name,
        "rate_grid": grid.to_string(),
        "rho": args.rho,
        "mutual_information": capacity,
    });
    let manifest = RunManifest::new(
        "exponents",
        super::parameters(resolved, argv),
        OPTIMIZER_SEED,
    );
    ensure_dir(&args.out)?;

    let (schema, params) = match args.kind {
        ExponentKind::Correct => (CORRECT_SCHEMA, ["beta_r", "saturated"]),
        ExponentKind::Error => (ERROR_SCHEMA, ["rho", "beta"]),
    };
    let columns = [
        "rate",
        "exponent",
        params[0],
        params[1],
        "crosscheck",
        "closed_form",
        "optimizer_y",
    ];
    let mut csv = CsvOut::create(
        args.out.join(format!("exponents_{kind_name}.csv")),
        schema,
        &manifest,
        &columns,
    )?;
    for res in &results {
        let (a, b) = match res.aux {
            ExponentAux::Correct { beta_r, saturated } => (fmt_num(beta_r), saturated.to_string()),
            ExponentAux::Error { rho, beta } => (fmt_num(rho), fmt_num(beta)),
        };
        let y: Vec<String> = res
            .optimizer_y
            .as_slice()
            .iter()
            .map(|&v| fmt_num(v))
            .collect();
        csv.row([
            fmt_num(res.rate),
            fmt_num(res.exponent),
            a,
            b,
            fmt_opt(res.crosscheck),
            fmt_opt(closed_form(&ch, args.kind, res.rate, args.rho)),
            y.join(";"),
        ])?;
    }
    let csv_path = csv.finish()?;
    let manifest_path = manifest.write(&args.out)?;
    println!("{}\n{}", csv_path.display(), manifest_path.display());
    Ok(())
}
