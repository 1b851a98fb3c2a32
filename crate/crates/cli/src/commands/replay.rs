use clap::Parser;

use crate::args::{Cli, Command, ReplayArgs};
use crate::error::{CliError, CliResult};
use crate::output::RunManifest;

/// Rebuilds the command line recorded in a manifest, pointed at a new
/// output directory.
pub fn load(args: &ReplayArgs) -> CliResult<(Cli, Vec<String>)> {
    let manifest = RunManifest::read(&args.manifest)?;
    let argv: Vec<String> = manifest
        .parameters
        .get("argv")
        .and_then(|v| v.as_array())
        .and_then(|a| {
            a.iter()
                .map(|s| s.as_str().map(String::from))
                .collect::<Option<Vec<_>>>()
        })
        .ok_or_else(|| {
            CliError::Input(format!(
                "{}: manifest has no argv record",
                args.manifest.display()
            ))
        })?;
    let mut full = vec!["remcode".to_string()];
    full.extend(argv.iter().cloned());
    full.push("--out".into());
    full.push(args.out.display().to_string());
    let cli = Cli::try_parse_from(&full)
        .map_err(|e| CliError::Input(format!("recorded arguments no longer parse: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(CliError::Input("a manifest cannot record a replay".into()));
    }
    Ok((cli, argv))
}
