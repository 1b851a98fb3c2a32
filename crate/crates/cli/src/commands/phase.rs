use remcode::{
    beta_0, beta_c, boundary_curves, classify_grid, mutual_information_uniform,
    universal_boundary_curves, BoundaryKind, Decoder,
};
use serde_json::json;

use crate::args::{parse_distribution, PhaseArgs};
use crate::error::{CliError, CliResult};
use crate::grid::Grid;
use crate::output::{ensure_dir, fmt_num, fmt_opt, CsvOut, RunManifest};

pub const POINTS_SCHEMA: &str = "remcode.phase_points.v1";
pub const BOUNDARIES_SCHEMA: &str = "remcode.phase_boundaries.v1";

pub fn run(args: PhaseArgs, argv: Vec<String>) -> CliResult<()> {
    let ch = args.source.load()?;
    let q = match &args.output_dist {
        Some(text) => parse_distribution(text, ch.output_size())?,
        None => ch.output_marginal(),
    };
    let ln_x = ch.log_input_size();
    let rate_grid = args
        .rate_grid
        .unwrap_or(Grid::new(0.01 * ln_x, 0.99 * ln_x, 50));
    let (rates, temps) = (rate_grid.points(), args.temp_grid.points());
    if rates.is_empty() || temps.is_empty() {
        return Err(CliError::Infeasible(
            "rate and temperature grids must be nonempty".into(),
        ));
    }
    let decoder = Decoder::from(args.decoder);

    let points = classify_grid(&ch, &q, decoder, &rates, &temps)?;
    let capacity = mutual_information_uniform(&ch).mutual_information;
    // critical and ferromagnetic-boundary temperatures per rate
    let per_rate = rates
        .iter()
        .map(|&r| -> CliResult<(f64, Option<f64>)> {
            Ok(match decoder {
                Decoder::Map => {
                    let t_0 = if r <= capacity {
                        Some(1.0 / beta_0(&ch, &q, r)?)
                    } else {
                        None
                    };
                    (1.0 / beta_c(&ch, &q, r)?.beta, t_0)
                }
                Decoder::Universal => (1.0, (r <= capacity).then(|| capacity / r)),
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let curves = BoundaryKind::ALL
        .iter()
        .map(|&kind| match decoder {
            Decoder::Map => boundary_curves(&ch, &q, kind, &rates),
            Decoder::Universal => universal_boundary_curves(&ch, kind, &rates),
        })
        .collect::<remcode::Result<Vec<_>>>()?;

    let resolved = json!({
        "channel": args.source.describe(&ch),
        "decoder": decoder.to_string(),
        "rate_grid": rate_grid.to_string(),
        "temp_grid": args.temp_grid.to_string(),
        "output_dist": q.as_slice(),
    });
    let manifest = RunManifest::new("phase-diagram", super::parameters(resolved, argv), 0);
    ensure_dir(&args.out)?;

    let mut csv = CsvOut::create(
        args.out.join("phase_points.csv"),
        POINTS_SCHEMA,
        &manifest,
        &[
            "rate",
            "temperature",
            "beta",
            "phase",
            "f_ferro",
            "f_incorrect",
            "f_glassy",
            "f_para",
            "t_c",
            "t_0",
        ],
    )?;
    for (i, p) in points.iter().enumerate() {
        let (t_c, t_0) = per_rate[i / temps.len()];
        csv.row([
            fmt_num(p.rate),
            fmt_num(p.temperature),
            fmt_num(1.0 / p.temperature),
            p.phase.to_string(),
            fmt_num(p.f_ferro),
            fmt_num(p.f_incorrect),
            fmt_num(p.f_glassy),
            fmt_num(p.f_para),
            fmt_num(t_c),
            fmt_opt(t_0),
        ])?;
    }
    let points_path = csv.finish()?;

    let mut csv = CsvOut::create(
        args.out.join("phase_boundaries.csv"),
        BOUNDARIES_SCHEMA,
        &manifest,
        &["curve", "rate", "temperature"],
    )?;
    for c in &curves {
        for &(r, t) in &c.samples {
            csv.row([c.kind.to_string(), fmt_num(r), fmt_num(t)])?;
        }
    }
    let boundaries_path = csv.finish()?;
    let manifest_path = manifest.write(&args.out)?;
    for p in [points_path, boundaries_path, manifest_path] {
        println!("{}", p.display());
    }
    Ok(())
}
