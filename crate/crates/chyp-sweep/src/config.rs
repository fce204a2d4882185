//! Sweep configuration: defaults, a flat `key = value` file format and the thread override.

use std::path::PathBuf;
use std::str::FromStr;

use chyp::quadrangle::{DEFAULT_MARGIN, DEFAULT_Z_SEED, MARGINAL_BAND};

use crate::error::SweepError;

/// Environment variable that overrides the worker thread count.
pub const THREADS_ENV: &str = "CHYP_SWEEP_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl FromStr for Format {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, SweepError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(SweepError::Config(format!("unknown format `{other}`"))),
        }
    }
}

/// Record filters applied at emission; the summary always counts every accepted tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Filter {
    /// `tau` is an integer.
    IntegerTau,
    /// `3e >= chi`, the range where a real hyperbolic structure exists.
    RealHyperbolic,
    /// Genus among the two smallest values, `e` among the two largest, or minimal `e/chi`.
    Extremes,
}

impl FromStr for Filter {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, SweepError> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "integer_tau" => Ok(Filter::IntegerTau),
            "real_hyperbolic" => Ok(Filter::RealHyperbolic),
            "extremes" => Ok(Filter::Extremes),
            other => Err(SweepError::Config(format!("unknown filter `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n_min: i64,
    pub n_max: i64,
    /// Strict-inequality margin of the quadrangle conditions.
    pub margin: f64,
    /// Slack band within which a tuple is flagged marginal.
    pub marginal_band: f64,
    /// Worker threads; `None` lets the pool decide.
    pub threads: Option<usize>,
    pub format: Format,
    /// Output file; `None` writes to standard output.
    pub output: Option<PathBuf>,
    pub z_seed: f64,
    pub filters: Vec<Filter>,
    /// Run the identity, Toledo-integral and triangle checks on every accepted tuple.
    pub verify_identities: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n_min: 3,
            n_max: 12,
            margin: DEFAULT_MARGIN,
            marginal_band: MARGINAL_BAND,
            threads: None,
            format: Format::Csv,
            output: None,
            z_seed: DEFAULT_Z_SEED,
            filters: Vec::new(),
            verify_identities: false,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, SweepError> {
    value.trim().parse().map_err(|_| SweepError::Config(format!("invalid value `{value}` for `{key}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, SweepError> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(SweepError::Config(format!("invalid boolean `{value}` for `{key}`"))),
    }
}

impl SweepConfig {
    /// Sets one field from its textual form; keys use the long flag names with `_` or `-`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), SweepError> {
        match key.trim().replace('-', "_").as_str() {
            "n_min" => self.n_min = parse(key, value)?,
            "n_max" => self.n_max = parse(key, value)?,
            "margin" => self.margin = parse(key, value)?,
            "marginal_band" => self.marginal_band = parse(key, value)?,
            "threads" => {
                let v = value.trim();
                self.threads = if v.eq_ignore_ascii_case("auto") { None } else { Some(parse(key, v)?) };
            }
            "format" => self.format = value.parse()?,
            "out" | "output" => self.output = Some(PathBuf::from(value.trim())),
            "z_seed" => self.z_seed = parse(key, value)?,
            "filter" | "filters" => {
                self.filters = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(str::parse)
                    .collect::<Result<_, _>>()?;
            }
            "verify_identities" => self.verify_identities = parse_bool(key, value)?,
            other => return Err(SweepError::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Applies a flat `key = value` text; blank lines and `#` comments are ignored.
    pub fn apply_text(&mut self, text: &str) -> Result<(), SweepError> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| SweepError::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self, SweepError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SweepError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = SweepConfig::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    /// Replaces `threads` with the value of [`THREADS_ENV`] when that variable is set.
    pub fn apply_env(&mut self) -> Result<(), SweepError> {
        if let Ok(v) = std::env::var(THREADS_ENV) {
            self.set("threads", &v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.n_min < 3 || self.n_min > self.n_max {
            return Err(SweepError::Config(format!("need 3 <= n_min <= n_max, got {}..{}", self.n_min, self.n_max)));
        }
        if self.margin.is_nan() || self.margin <= 0.0 || self.marginal_band.is_nan() || self.marginal_band <= 0.0 {
            return Err(SweepError::Config("margin and marginal_band must be positive".into()));
        }
        if self.threads == Some(0) {
            return Err(SweepError::Config("threads must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_overrides_defaults() {
        let mut cfg = SweepConfig::default();
        cfg.apply_text("# range\nn_min = 9\nn-max=20\nformat = jsonl\nfilter = integer_tau, real-hyperbolic\nverify_identities = yes\nthreads = auto\n")
            .unwrap();
        assert_eq!((cfg.n_min, cfg.n_max), (9, 20));
        assert_eq!(cfg.format, Format::Jsonl);
        assert_eq!(cfg.filters, vec![Filter::IntegerTau, Filter::RealHyperbolic]);
        assert!(cfg.verify_identities);
        assert_eq!(cfg.threads, None);
        cfg.validate().unwrap();
    }

    #[test]
    fn bad_input_is_a_config_error() {
        let mut cfg = SweepConfig::default();
        assert!(matches!(cfg.apply_text("n_min 4"), Err(SweepError::Config(_))));
        assert!(matches!(cfg.set("colour", "red"), Err(SweepError::Config(_))));
        assert!(matches!(cfg.set("margin", "x"), Err(SweepError::Config(_))));
        cfg.n_min = 2;
        assert!(cfg.validate().is_err());
        cfg.n_min = 5;
        cfg.margin = 0.0;
        assert!(cfg.validate().is_err());
    }
}
