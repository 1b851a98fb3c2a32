use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use remcode::{Channel, Decoder, OutputDistribution, SimMode};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::grid::Grid;

#[derive(Debug, Parser)]
#[command(
    name = "remcode",
    version,
    about = "Finite-temperature decoding of random codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify an (R, T) grid and trace the phase boundaries.
    PhaseDiagram(PhaseArgs),
    /// Correct-decoding or error exponents over a rate grid.
    Exponents(ExponentArgs),
    /// Monte Carlo random codebooks: free energies, ranks, rare events.
    Simulate(SimulateArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct ChannelSource {
    /// Channel file (JSON).
    #[arg(long, value_name = "FILE")]
    pub channel: Option<PathBuf>,
    /// Binary symmetric channel with crossover P.
    #[arg(long, value_name = "P")]
    pub bsc: Option<f64>,
}

impl ChannelSource {
    pub fn load(&self) -> CliResult<Channel> {
        match (&self.channel, self.bsc) {
            (Some(path), _) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    CliError::Input(format!("cannot read channel file {}: {e}", path.display()))
                })?;
                Channel::from_json_str(&text)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
            }
            (None, Some(p)) => Channel::bsc(p).map_err(|e| CliError::Input(e.to_string())),
            (None, None) => Err(CliError::Input(
                "one of --channel or --bsc is required".into(),
            )),
        }
    }

    /// The channel as recorded in manifests: the matrix itself, so a manifest
    /// stays meaningful if the file moves.
    pub fn describe(&self, ch: &Channel) -> Value {
        match (&self.channel, self.bsc) {
            (Some(path), _) => json!({ "file": path.display().to_string(), "p": ch.rows() }),
            _ => json!({ "bsc": self.bsc }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecoderArg {
    Map,
    Universal,
}

impl From<DecoderArg> for Decoder {
    fn from(d: DecoderArg) -> Self {
        match d {
            DecoderArg::Map => Decoder::Map,
            DecoderArg::Universal => Decoder::Universal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExponentKind {
    Correct,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Enumerate,
    #[value(alias = "bsc_spectrum")]
    BscSpectrum,
}

impl From<ModeArg> for SimMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Enumerate => SimMode::Enumerate,
            ModeArg::BscSpectrum => SimMode::BscSpectrum,
        }
    }
}

#[derive(Debug, Args)]
pub struct PhaseArgs {
    #[command(flatten)]
    pub source: ChannelSource,
    #[arg(long, value_enum, default_value = "map")]
    pub decoder: DecoderArg,
    /// Rates lo:hi:steps [default: 0.01·ln|X| to 0.99·ln|X|, 50 points].
    #[arg(long, value_name = "LO:HI:STEPS")]
    pub rate_grid: Option<Grid>,
    /// Temperatures lo:hi:steps.
    #[arg(long, value_name = "LO:HI:STEPS", default_value = "0.1:3:30")]
    pub temp_grid: Grid,
    /// Output distribution q(y) as comma-separated weights [default: the
    /// output marginal under uniform inputs].
    #[arg(long, value_name = "Q1,Q2,...")]
    pub output_dist: Option<String>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExponentArgs {
    #[command(flatten)]
    pub source: ChannelSource,
    #[arg(long, value_enum)]
    pub kind: ExponentKind,
    /// Rates lo:hi:steps [default: above I(X;Y) for correct, [0, I(X;Y)] for error].
    #[arg(long, value_name = "LO:HI:STEPS")]
    pub rate_grid: Option<Grid>,
    /// Fix ρ instead of optimizing it (error exponent only).
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: ChannelSource,
    /// Sampler [default: bsc-spectrum for --bsc, enumerate otherwise].
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Block length.
    #[arg(long)]
    pub n: usize,
    /// Rate in nats; the codebook has round(e^(nR)) codewords.
    #[arg(long)]
    pub rate: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Slack of the overpopulation event B.
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Draw M random codewords besides the transmitted one instead of M - 1.
    #[arg(long)]
    pub include_correct: bool,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long, value_name = "FILE")]
    pub manifest: PathBuf,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

pub fn parse_distribution(text: &str, size: usize) -> CliResult<OutputDistribution> {
    let weights = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Input(format!("'{t}' is not a probability")))
        })
        .collect::<CliResult<Vec<f64>>>()?;
    if weights.len() != size {
        return Err(CliError::Input(format!(
            "output distribution has {} entries, the channel has {size} outputs",
            weights.len()
        )));
    }
    OutputDistribution::new(weights).map_err(|e| CliError::Input(e.to_string()))
}

/// The arguments after the program name, minus `--out`, as stored in
/// manifests for replay.
pub fn recorded_argv(args: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--out" {
            skip = true;
        } else if !a.starts_with("--out=") {
            out.push(a.clone());
        }
    }
    out
}
