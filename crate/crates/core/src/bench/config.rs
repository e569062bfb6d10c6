use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use super::BenchError;
use crate::dist::DistSpec;

/// Which estimator a benchmark runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorKind {
    Median,
    NormalMeanKnown,
    NormalMeanBound,
    MonopolyRegular,
    MonopolyGeneral,
    CdfGeneral,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 6] = [
        EstimatorKind::Median,
        EstimatorKind::NormalMeanKnown,
        EstimatorKind::NormalMeanBound,
        EstimatorKind::MonopolyRegular,
        EstimatorKind::MonopolyGeneral,
        EstimatorKind::CdfGeneral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::Median => "median",
            EstimatorKind::NormalMeanKnown => "normal-mean-known",
            EstimatorKind::NormalMeanBound => "normal-mean-bound",
            EstimatorKind::MonopolyRegular => "monopoly-regular",
            EstimatorKind::MonopolyGeneral => "monopoly-general",
            EstimatorKind::CdfGeneral => "cdf-general",
        }
    }

    /// A trial succeeds when its loss is at most `mult * eps`.
    pub fn default_threshold_mult(self) -> f64 {
        match self {
            EstimatorKind::Median | EstimatorKind::NormalMeanKnown | EstimatorKind::NormalMeanBound => 1.0,
            EstimatorKind::MonopolyRegular | EstimatorKind::MonopolyGeneral => 4.0,
            EstimatorKind::CdfGeneral => 2.0,
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for EstimatorKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|k| k.name()).collect();
            BenchError::Config(format!("unknown estimator `{s}`, expected one of {}", names.join(", ")))
        })
    }
}

/// A fully validated benchmark description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub estimator: EstimatorKind,
    #[serde(serialize_with = "display")]
    pub dist: DistSpec,
    /// Strictly decreasing accuracy targets.
    pub eps_list: Vec<f64>,
    /// Failure probability handed to estimators that take one.
    pub delta: f64,
    pub trials: u64,
    pub base_seed: u64,
    pub budget: Option<u64>,
    pub output: Option<PathBuf>,
    pub threshold_mult: f64,
    /// Refuse distributions outside the estimator's class.
    pub validate: bool,
    /// Scale bound for `normal-mean-bound`; the true scale when unset.
    pub sigma_bar: Option<f64>,
    pub workers: usize,
}

fn display<T: fmt::Display, S: serde::Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// Parses flat `key = value` text. Blank lines and lines starting with `#`
/// are skipped; keys are normalized to lowercase with `-` for `_`; later
/// duplicates win.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>, BenchError> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(BenchError::Config(format!("line {}: expected `key = value`", n + 1)));
        };
        let key = normalize_key(k);
        if key.is_empty() {
            return Err(BenchError::Config(format!("line {}: empty key", n + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

fn normalize_key(k: &str) -> String {
    k.trim().to_ascii_lowercase().replace('_', "-")
}

const KNOWN_KEYS: [&str; 13] = [
    "estimator",
    "dist",
    "eps",
    "eps-list",
    "delta",
    "trials",
    "seed",
    "budget",
    "out",
    "threshold-mult",
    "no-validate",
    "sigma-bar",
    "workers",
];

fn num<T: FromStr>(key: &str, v: &str) -> Result<T, BenchError> {
    v.trim()
        .parse()
        .map_err(|_| BenchError::Config(format!("`{key}`: cannot parse `{v}`")))
}

fn boolean(key: &str, v: &str) -> Result<bool, BenchError> {
    match v.trim().to_ascii_lowercase().as_str() {
        "" | "1" | "true" | "yes" => Ok(true),
        "0" | "false" | "no" => Ok(false),
        other => Err(BenchError::Config(format!("`{key}`: expected a boolean, found `{other}`"))),
    }
}

/// Parses a comma-separated list of accuracies.
pub(crate) fn parse_eps_list(v: &str) -> Result<Vec<f64>, BenchError> {
    v.split(',').map(|t| num::<f64>("eps-list", t)).collect()
}

impl ExperimentConfig {
    /// Builds and validates a config from normalized key/value pairs, such as
    /// a parsed config file with command-line flags merged over it.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self, BenchError> {
        if let Some(k) = map.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(BenchError::Config(format!("unknown key `{k}`")));
        }
        let get = |k: &str| map.get(k).map(String::as_str);
        let estimator: EstimatorKind = get("estimator")
            .ok_or_else(|| BenchError::Config("missing `estimator`".into()))?
            .parse()?;
        let dist: DistSpec = get("dist").ok_or_else(|| BenchError::Config("missing `dist`".into()))?.parse()?;
        let eps_list = match (get("eps-list"), get("eps")) {
            (Some(list), _) => parse_eps_list(list)?,
            (None, Some(e)) => vec![num("eps", e)?],
            (None, None) => return Err(BenchError::Config("missing `eps` or `eps-list`".into())),
        };
        let cfg = ExperimentConfig {
            estimator,
            dist,
            eps_list,
            delta: get("delta").map(|v| num("delta", v)).transpose()?.unwrap_or(0.1),
            trials: get("trials").map(|v| num("trials", v)).transpose()?.unwrap_or(1),
            base_seed: get("seed").map(|v| num("seed", v)).transpose()?.unwrap_or(0),
            budget: get("budget").map(|v| num("budget", v)).transpose()?,
            output: get("out").filter(|v| !v.is_empty()).map(PathBuf::from),
            threshold_mult: get("threshold-mult")
                .map(|v| num("threshold-mult", v))
                .transpose()?
                .unwrap_or(estimator.default_threshold_mult()),
            validate: !get("no-validate").map(|v| boolean("no-validate", v)).transpose()?.unwrap_or(false),
            sigma_bar: get("sigma-bar").map(|v| num("sigma-bar", v)).transpose()?,
            workers: get("workers").map(|v| num("workers", v)).transpose()?.unwrap_or(0),
        };
        cfg.check()?;
        Ok(cfg)
    }

    /// Parses a config file's text.
    pub fn from_text(text: &str) -> Result<Self, BenchError> {
        Self::from_map(&parse_key_values(text)?)
    }

    /// Enforces the structural invariants.
    pub fn check(&self) -> Result<(), BenchError> {
        let bad = |m: String| Err(BenchError::Config(m));
        if self.eps_list.is_empty() {
            return bad("eps list is empty".into());
        }
        if let Some(e) = self.eps_list.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
            return bad(format!("eps must lie in (0, 1), got {e}"));
        }
        if self.eps_list.windows(2).any(|w| w[1] >= w[0]) {
            return bad("eps list must be strictly decreasing".into());
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("delta must lie in (0, 1), got {}", self.delta));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !(self.threshold_mult.is_finite() && self.threshold_mult > 0.0) {
            return bad(format!("threshold multiplier must be positive, got {}", self.threshold_mult));
        }
        if let Some(s) = self.sigma_bar {
            if !(s.is_finite() && s > 0.0) {
                return bad(format!("sigma-bar must be positive, got {s}"));
            }
        }
        Ok(())
    }

    /// Worker threads to use: the configured count, or the available
    /// parallelism when zero.
    pub fn worker_count(&self) -> usize {
        if self.workers > 0 {
            self.workers
        } else {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        }
    }
}
