//! File loading, argument parsing helpers and output emission.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

use wbs_core::embed::FiniteSequence;
use wbs_core::metric::{FiniteMetricSpace, SpaceFile};
use wbs_core::weaknull::{Subsequence, SubsequenceRule};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn load_space(path: &Path, tolerance: f64) -> Result<FiniteMetricSpace> {
    let file: SpaceFile = read_json(path)?;
    let (labels, rows) = file.into_matrix()?;
    FiniteMetricSpace::from_matrix_with_tolerance(labels, rows, tolerance)
        .with_context(|| format!("loading space {}", path.display()))
}

/// A mistake in how the command was invoked, as opposed to a failed check.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Writes pretty JSON to `out`, or to stdout when `out` is `None`.
pub fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => Ok(other?),
            }
        }
    }
}

pub fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| anyhow::anyhow!("bad list entry {s:?}: {e}")))
        .collect()
}

fn two_numbers(spec: &str, what: &str) -> Result<(u64, u64)> {
    match parse_list::<u64>(spec)?[..] {
        [a, b] => Ok((a, b)),
        _ => bail!("{what} expects two comma-separated integers, got {spec:?}"),
    }
}

/// `affine:SLOPE,OFFSET`, `geometric:FIRST,RATIO`, `random:LEN,MAX_STEP`
/// (drawn from `seed`), or a JSON file holding either a subsequence object or
/// a bare array of integers.
pub fn parse_subsequence(spec: &str, seed: u64) -> Result<Subsequence> {
    if let Some(rest) = spec.strip_prefix("affine:") {
        let (slope, offset) = two_numbers(rest, "affine")?;
        return Ok(Subsequence::from_rule(SubsequenceRule::Affine { slope, offset })?);
    }
    if let Some(rest) = spec.strip_prefix("geometric:") {
        let (first, ratio) = two_numbers(rest, "geometric")?;
        return Ok(Subsequence::from_rule(SubsequenceRule::Geometric { first, ratio })?);
    }
    if let Some(rest) = spec.strip_prefix("random:") {
        let (len, step) = two_numbers(rest, "random")?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok(Subsequence::random(&mut rng, len as usize, step));
    }
    let path = PathBuf::from(spec);
    if !path.exists() {
        bail!("{spec:?} is neither a rule (affine:, geometric:, random:) nor a file");
    }
    let value: serde_json::Value = read_json(&path)?;
    if value.is_array() {
        let prefix: Vec<u64> = serde_json::from_value(value)?;
        return Ok(Subsequence::from_prefix(prefix)?);
    }
    let parsed: Subsequence = serde_json::from_value(value)?;
    // Re-run validation, which deserialisation skips.
    Ok(Subsequence::new(parsed.prefix().to_vec(), parsed.rule().cloned())?)
}

/// `random:SEED` (entries uniform in `[-1, 1]`) or a JSON array file.
pub fn parse_vector(spec: &str, len: usize) -> Result<FiniteSequence> {
    let a = match spec.strip_prefix("random:") {
        Some(seed) => {
            let seed: u64 = seed.parse().context("random:SEED needs an integer seed")?;
            FiniteSequence::random(&mut ChaCha8Rng::seed_from_u64(seed), len, 1.0)
        }
        None => read_json(Path::new(spec))?,
    };
    if a.len() != len {
        bail!("vector has {} entries, expected {len}", a.len());
    }
    Ok(a)
}
