use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

pub const SIG_DIGITS: usize = 12;

/// `%.12g`: twelve significant digits, trailing zeros removed, scientific
/// notation below `1e-4` and from `1e12` on.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIG_DIGITS as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

/// Provenance of one invocation, written next to its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub seed: u64,
    pub tool_version: String,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, parameters: Map<String, Value>, seed: u64) -> Self {
        Self {
            command: command.into(),
            parameters,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
        }
    }

    /// One-line provenance for file headers; leaves out the timestamp so
    /// reruns are byte-identical.
    pub fn header(&self) -> String {
        let params = serde_json::to_string(&self.parameters).expect("JSON map serializes");
        format!(
            "remcode {} command={} seed={} parameters={params}",
            self.tool_version, self.command, self.seed
        )
    }

    pub fn write(&self, dir: &Path) -> CliResult<PathBuf> {
        let path = dir.join("manifest.json");
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

/// A CSV file whose first line names its schema and whose second line
/// carries the run header.
pub struct CsvOut {
    path: PathBuf,
    inner: csv::Writer<BufWriter<File>>,
}

impl CsvOut {
    pub fn create(
        path: PathBuf,
        schema: &str,
        manifest: &RunManifest,
        columns: &[&str],
    ) -> CliResult<Self> {
        let mut file = create(&path)?;
        writeln!(file, "# schema: {schema}").map_err(|e| CliError::io(&path, e))?;
        writeln!(file, "# {}", manifest.header()).map_err(|e| CliError::io(&path, e))?;
        let mut inner = csv::Writer::from_writer(file);
        inner.write_record(columns)?;
        Ok(Self { path, inner })
    }

    pub fn row<I, S>(&mut self, fields: I) -> CliResult<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.inner.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> CliResult<PathBuf> {
        self.inner
            .flush()
            .map_err(|e| CliError::io(&self.path, e))?;
        Ok(self.path)
    }
}

/// Newline-delimited JSON, one value per line.
pub fn write_json_lines<T: Serialize>(path: &Path, values: &[T]) -> CliResult<()> {
    let mut file = create(path)?;
    for v in values {
        serde_json::to_writer(&mut file, v)
            .map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?;
        file.write_all(b"\n").map_err(|e| CliError::io(path, e))?;
    }
    file.flush().map_err(|e| CliError::io(path, e))
}
