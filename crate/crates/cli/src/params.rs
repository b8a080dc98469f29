//! Parameter resolution: command-line flag, then `--config` file, then default.
//!
//! Every resolved value is recorded, in query order, for the `# swgeo ...`
//! header line so that an output file documents exactly what produced it.

use anyhow::{anyhow, bail, Context, Result};
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Default)]
pub struct Params {
    config: BTreeMap<String, String>,
    used: Vec<(String, String)>,
}

impl Params {
    pub fn new(config: BTreeMap<String, String>) -> Self {
        Self { config, used: Vec::new() }
    }

    pub fn from_file(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Ok(Self::new(parse_config(&text).with_context(|| format!("parsing config {}", path.display()))?))
    }

    /// Config-file value for `key`, not recorded in the summary.
    pub fn config_value(&self, key: &str) -> Option<&str> {
        self.config.get(key).map(String::as_str)
    }

    /// The raw string for `key` after applying precedence.
    pub fn raw(&mut self, key: &str, flag: Option<&str>, default: &str) -> String {
        let value = flag
            .map(str::to_string)
            .or_else(|| self.config.get(key).cloned())
            .unwrap_or_else(|| default.to_string());
        self.used.push((key.to_string(), value.clone()));
        value
    }

    pub fn get<T>(&mut self, key: &str, flag: Option<&str>, default: &str) -> Result<T>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        let raw = self.raw(key, flag, default);
        raw.parse().map_err(|e| anyhow!("invalid value {raw:?} for {key}: {e}"))
    }

    /// `key=value` pairs in query order, space separated.
    pub fn summary(&self) -> String {
        self.used.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
    }
}

/// `key = value` lines; `#` starts a comment; keys use the long flag names.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("line {}: expected key=value", n + 1);
        };
        out.insert(k.trim().trim_start_matches("--").to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Real-valued grids: `a,b,c`, `lin:lo:hi:n` or `log:lo:hi:n`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [kind @ ("lin" | "log"), lo, hi, n] => {
            let lo: f64 = lo.parse().with_context(|| format!("grid start {lo:?}"))?;
            let hi: f64 = hi.parse().with_context(|| format!("grid end {hi:?}"))?;
            let n: usize = n.parse().with_context(|| format!("grid size {n:?}"))?;
            if n < 2 {
                bail!("grid {text:?} needs at least two points");
            }
            if *kind == "log" && (lo <= 0.0 || hi <= 0.0) {
                bail!("log grid {text:?} needs positive end points");
            }
            Ok((0..n)
                .map(|k| {
                    let u = k as f64 / (n - 1) as f64;
                    if k == 0 {
                        lo
                    } else if k == n - 1 {
                        hi
                    } else if *kind == "lin" {
                        lo + (hi - lo) * u
                    } else {
                        (lo.ln() + (hi.ln() - lo.ln()) * u).exp()
                    }
                })
                .collect())
        }
        _ => parse_list(text),
    }
}

/// Comma-separated values.
pub fn parse_list<T>(text: &str) -> Result<Vec<T>>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(|s| s.trim().parse().map_err(|e| anyhow!("invalid list entry {s:?}: {e}")))
        .collect()
}
