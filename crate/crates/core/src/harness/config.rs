use std::collections::BTreeMap;
use std::path::PathBuf;

use super::{BenchError, StreamFormat};
use crate::estimator::EstimatorKind;
use crate::metrics::DEFAULT_CENTER_BAND;
use crate::spec::QuantileSpec;
use crate::stream::{Preset, StreamSpec};

/// Where a benchmark reads its stream from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    File { path: PathBuf, format: StreamFormat },
    Generated(StreamSpec),
}

/// One benchmark grid: every estimator × quantile × capacity combination is
/// a cell replayed independently over the same stream.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub source: Source,
    pub quantiles: Vec<f64>,
    pub capacities: Vec<usize>,
    pub estimators: Vec<EstimatorKind>,
    pub trace_every: u64,
    pub seed: u64,
    pub band: f64,
    pub report: Option<PathBuf>,
    pub trace_dir: Option<PathBuf>,
}

impl BenchConfig {
    pub fn new(source: Source) -> Self {
        BenchConfig {
            source,
            quantiles: vec![0.95],
            capacities: vec![100],
            estimators: vec![EstimatorKind::Tas],
            trace_every: 1,
            seed: 0,
            band: DEFAULT_CENTER_BAND,
            report: None,
            trace_dir: None,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let cfg = |m: &str| Err(BenchError::Config(m.to_string()));
        if self.quantiles.is_empty() {
            return cfg("no quantiles given");
        }
        if self.capacities.is_empty() {
            return cfg("no capacities given");
        }
        if self.estimators.is_empty() {
            return cfg("no estimators given");
        }
        if self.trace_every == 0 {
            return cfg("trace-every must be at least 1");
        }
        if !(self.band >= 0.0 && self.band.is_finite()) {
            return cfg("band must be a nonnegative number");
        }
        for &q in &self.quantiles {
            for &m in &self.capacities {
                QuantileSpec::new(q, m)?;
            }
        }
        if let Source::Generated(spec) = &self.source {
            spec.validate()?;
        }
        Ok(())
    }

    /// Builds a config from flat `key = value` settings.
    ///
    /// Keys: `stream`, `format`, `preset`, `n`, `quantile`, `capacity`,
    /// `estimator`, `trace-every`, `seed`, `band`, `report`, `trace-dir`.
    /// List values are comma-separated. Exactly one of `stream` or `preset`
    /// selects the source; `seed` also seeds a generated stream.
    pub fn from_settings(settings: &BTreeMap<String, String>) -> Result<Self, BenchError> {
        fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, BenchError> {
            v.trim()
                .parse()
                .map_err(|_| BenchError::Config(format!("invalid value {v:?} for {key}")))
        }
        fn list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>, BenchError> {
            v.split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| parse(key, s))
                .collect()
        }
        let get = |k: &str| settings.get(k).map(String::as_str);
        for key in settings.keys() {
            const KNOWN: [&str; 12] = [
                "stream", "format", "preset", "n", "quantile", "capacity", "estimator",
                "trace-every", "seed", "band", "report", "trace-dir",
            ];
            if !KNOWN.contains(&key.as_str()) {
                return Err(BenchError::Config(format!("unknown setting {key:?}")));
            }
        }

        let seed = get("seed").map(|v| parse("seed", v)).transpose()?.unwrap_or(0);
        let source = match (get("stream"), get("preset")) {
            (Some(_), Some(_)) => {
                return Err(BenchError::Config("give either stream or preset, not both".into()))
            }
            (None, None) => return Err(BenchError::Config("no stream or preset given".into())),
            (Some(path), None) => Source::File {
                path: PathBuf::from(path),
                format: get("format").map(|v| parse::<StreamFormat>("format", v)).transpose()?.unwrap_or_default(),
            },
            (None, Some(preset)) => {
                let preset: Preset = preset.parse().map_err(BenchError::Config)?;
                let n = get("n").map(|v| parse("n", v)).transpose()?.unwrap_or(Preset::DEFAULT_LEN);
                Source::Generated(preset.spec(n, seed)?)
            }
        };
        let mut config = BenchConfig::new(source);
        config.seed = seed;
        if let Some(v) = get("quantile") {
            config.quantiles = list("quantile", v)?;
        }
        if let Some(v) = get("capacity") {
            config.capacities = list("capacity", v)?;
        }
        if let Some(v) = get("estimator") {
            config.estimators = v
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.parse().map_err(BenchError::Config))
                .collect::<Result<_, _>>()?;
        }
        if let Some(v) = get("trace-every") {
            config.trace_every = parse("trace-every", v)?;
        }
        if let Some(v) = get("band") {
            config.band = parse("band", v)?;
        }
        config.report = get("report").map(PathBuf::from);
        config.trace_dir = get("trace-dir").map(PathBuf::from);
        config.validate()?;
        Ok(config)
    }
}

/// Parses a flat `key = value` file. `#` starts a comment; blank lines are
/// ignored; later keys override earlier ones.
pub fn parse_settings(text: &str) -> Result<BTreeMap<String, String>, BenchError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| BenchError::Config(format!("line {}: expected key=value", i + 1)))?;
        out.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(out)
}
