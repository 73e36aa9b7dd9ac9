//! Experiment configuration for `simulate`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GameSpec {
    Identity {
        n: usize,
    },
    /// Entries i.i.d. uniform on [0, 1), drawn from the run's matrix stream.
    RandomUniform {
        rows: usize,
        cols: usize,
    },
}

impl FromStr for GameSpec {
    type Err = String;

    /// `identity:N` or `random:MxN`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let dim = |x: &str| match x.parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(format!("bad dimension {x:?}")),
        };
        if let Some(n) = s.strip_prefix("identity:") {
            return Ok(Self::Identity { n: dim(n)? });
        }
        if let Some(mn) = s.strip_prefix("random:") {
            let (m, n) = mn
                .split_once('x')
                .ok_or_else(|| format!("expected random:MxN, got {s:?}"))?;
            return Ok(Self::RandomUniform {
                rows: dim(m)?,
                cols: dim(n)?,
            });
        }
        Err(format!("expected identity:N or random:MxN, got {s:?}"))
    }
}

impl fmt::Display for GameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Identity { n } => write!(f, "identity:{n}"),
            Self::RandomUniform { rows, cols } => write!(f, "random:{rows}x{cols}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PolicySpec {
    Lexicographic,
    SeededRandom,
    GreedyGap,
}

fn default_ratio() -> f64 {
    1.1
}

fn default_epsilon() -> f64 {
    fpdyn_core::matrix::DEFAULT_TOLERANCE
}

/// Everything needed to reproduce one `simulate` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub game: GameSpec,
    pub policy: PolicySpec,
    /// Master seed; see `fpdyn_core::seed` for how it is split.
    #[serde(default)]
    pub seed: u64,
    pub steps: u64,
    #[serde(default = "default_ratio")]
    pub sample_ratio: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub trace_out: Option<PathBuf>,
    #[serde(default)]
    pub csv_out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn check(&self) -> Result<(), String> {
        if self.sample_ratio.is_nan() || self.sample_ratio <= 1.0 {
            return Err(format!("sample_ratio must exceed 1, got {}", self.sample_ratio));
        }
        if self.epsilon.is_nan() || self.epsilon < 0.0 {
            return Err(format!("epsilon must be non-negative, got {}", self.epsilon));
        }
        Ok(())
    }
}

/// A config file holds one experiment or a list of them.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ConfigFile {
    One(ExperimentConfig),
    Many(Vec<ExperimentConfig>),
}

impl ConfigFile {
    /// Parses on the top-level shape so errors point at the offending field.
    pub fn parse(text: &str) -> serde_json::Result<Self> {
        if text.trim_start().starts_with('[') {
            serde_json::from_str(text).map(Self::Many)
        } else {
            serde_json::from_str(text).map(Self::One)
        }
    }

    pub fn into_vec(self) -> Vec<ExperimentConfig> {
        match self {
            Self::One(c) => vec![c],
            Self::Many(cs) => cs,
        }
    }
}
