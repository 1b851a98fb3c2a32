use thiserror::Error;

/// Errors raised by the channel, Gibbs, phase, exponent and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("channel file: {message}{}", location(*.row, *.col))]
    ChannelFile {
        row: Option<usize>,
        col: Option<usize>,
        message: String,
    },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("{what} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("unreachable output symbol {symbol}: p(y|x) = 0 for every input")]
    UnreachableOutput { symbol: usize },

    #[error(
        "rate {rate} is not reachable: conditional entropy cannot exceed the support ceiling (minimum rate {min_rate})"
    )]
    RateUnreachable { rate: f64, min_rate: f64 },

    #[error("infeasible entropy constraint: ln|X| - R = {required} exceeds the attainable maximum {attainable}")]
    InfeasibleConstraint { required: f64, attainable: f64 },

    #[error("mean distortion {delta} outside the achievable interval [{lo}, {hi}]")]
    DistortionOutOfRange { delta: f64, lo: f64, hi: f64 },

    #[error("no root in bracket [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoRoot {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("below-capacity rate for correct-decoding exponent: R = {rate} <= I(X;Y) = {mutual_information}")]
    BelowCapacity { rate: f64, mutual_information: f64 },

    #[error("rate R = {rate} exceeds I(X;Y) = {mutual_information}")]
    AboveCapacity { rate: f64, mutual_information: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("work bound exceeded: {0}")]
    WorkBound(String),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error("empty support: every codeword has zero likelihood for the received word")]
    EmptySupport,

    #[error("optimization failed: {0}")]
    Optimization(String),
}

fn location(row: Option<usize>, col: Option<usize>) -> String {
    match (row, col) {
        (Some(r), Some(c)) => format!(" (row {r}, column {c})"),
        (Some(r), None) => format!(" (row {r})"),
        _ => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
