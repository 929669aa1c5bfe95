//! Run configuration: a JSON document, optionally overridden by flags.

use crate::catalog::{Family, Params};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Einstein,
    Weyl,
    Petrov,
    Killing,
    Yano,
    Ks,
    Ode,
    Embedding,
    Geodesic,
    EllipticSelftest,
}

impl Check {
    pub const ALL: [Check; 10] = [
        Check::Einstein,
        Check::Weyl,
        Check::Petrov,
        Check::Killing,
        Check::Yano,
        Check::Ks,
        Check::Ode,
        Check::Embedding,
        Check::Geodesic,
        Check::EllipticSelftest,
    ];

    /// Checks `verify` runs when none are requested.
    pub const DEFAULT: [Check; 7] =
        [Check::Einstein, Check::Weyl, Check::Petrov, Check::Killing, Check::Yano, Check::Ks, Check::Ode];

    pub fn name(self) -> &'static str {
        match self {
            Check::Einstein => "einstein",
            Check::Weyl => "weyl",
            Check::Petrov => "petrov",
            Check::Killing => "killing",
            Check::Yano => "yano",
            Check::Ks => "ks",
            Check::Ode => "ode",
            Check::Embedding => "embedding",
            Check::Geodesic => "geodesic",
            Check::EllipticSelftest => "elliptic-selftest",
        }
    }

    pub fn default_tolerance(self, family: Option<Family>) -> f64 {
        match self {
            Check::Einstein if family == Some(Family::Bianchi5Minkowski) => 1e-5,
            Check::Einstein | Check::Weyl | Check::Petrov => 1e-6,
            Check::Killing | Check::Yano | Check::Ks => 1e-7,
            Check::Ode => 1e-9,
            Check::Embedding | Check::Geodesic => 1e-8,
            // Items carry their own tolerances; the reported residual is the worst ratio.
            Check::EllipticSelftest => 1.0,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::Config(format!("unknown check '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Config(format!("unknown format '{s}' (json or csv)"))),
        }
    }
}

/// Either `count` seeded quasi-random points in the sampling window, or a
/// tensor grid over explicit per-coordinate ranges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranges: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<usize>>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { count: Some(20), ranges: None, counts: None }
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// `N` or `lo:hi:n,lo:hi:n,lo:hi:n,lo:hi:n`.
    fn from_str(s: &str) -> Result<Self> {
        if let Ok(n) = s.trim().parse::<usize>() {
            return Ok(GridSpec { count: Some(n), ranges: None, counts: None });
        }
        let bad = || Error::Config(format!("bad grid '{s}': expected N or lo:hi:n for each of 4 coordinates"));
        let mut ranges = Vec::new();
        let mut counts = Vec::new();
        for axis in s.split(',') {
            let parts: Vec<&str> = axis.split(':').collect();
            let [lo, hi, n] = parts[..] else { return Err(bad()) };
            ranges.push([lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?]);
            counts.push(n.trim().parse().map_err(|_| bad())?);
        }
        if ranges.len() != 4 {
            return Err(bad());
        }
        Ok(GridSpec { count: None, ranges: Some(ranges), counts: Some(counts) })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub family: Option<String>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub checks: Vec<Check>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub output: Option<OutputSpec>,
    /// Affine span for geodesic runs.
    #[serde(default = "default_span")]
    pub span: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momentum: Option<[f64; 4]>,
}

fn default_span() -> f64 {
    10.0
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: None,
            params: Params::new(),
            grid: GridSpec::default(),
            seed: 0,
            checks: Vec::new(),
            tolerances: BTreeMap::new(),
            output: None,
            span: default_span(),
            start: None,
            momentum: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("bad config: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::from_json(&text)
    }

    pub fn family(&self) -> Result<Family> {
        self.family.as_deref().ok_or_else(|| Error::Config("no family given".into()))?.parse()
    }

    pub fn tolerance(&self, check: Check, family: Option<Family>) -> f64 {
        self.tolerances.get(check.name()).copied().unwrap_or_else(|| check.default_tolerance(family))
    }

    pub fn validate_tolerances(&self) -> Result<()> {
        for (k, v) in &self.tolerances {
            k.parse::<Check>()?;
            if !(*v > 0.0) {
                return Err(Error::Config(format!("tolerance for {k} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Parses `key=value` with a real value.
pub fn parse_assignment(s: &str) -> Result<(String, f64)> {
    let (k, v) = s.split_once('=').ok_or_else(|| Error::Config(format!("expected key=value, got '{s}'")))?;
    let v: f64 = v.trim().parse().map_err(|_| Error::Config(format!("'{v}' is not a number")))?;
    Ok((k.trim().to_string(), v))
}

/// Parses four comma-separated reals.
pub fn parse_point(s: &str) -> Result<[f64; 4]> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| Error::Config(format!("'{p}' is not a number"))))
        .collect::<Result<_>>()?;
    v.try_into().map_err(|_| Error::Config(format!("expected 4 comma-separated values, got '{s}'")))
}
