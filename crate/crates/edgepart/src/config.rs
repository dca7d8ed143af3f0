//! Run configuration shared by all partitioning pipelines.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Which partitioner to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Algorithm {
    /// Two-phase streaming with two-candidate scoring.
    TwoPsL,
    /// Two-phase streaming with HDRF scoring over all k partitions.
    TwoPsHdrf,
    /// Plain stateful streaming with HDRF scoring.
    Hdrf,
    /// Stateless degree-based hashing.
    Dbh,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::TwoPsL => "2ps-l",
            Algorithm::TwoPsHdrf => "2ps-hdrf",
            Algorithm::Hdrf => "hdrf",
            Algorithm::Dbh => "dbh",
        }
    }

    pub const ALL: [Algorithm; 4] = [
        Algorithm::TwoPsL,
        Algorithm::TwoPsHdrf,
        Algorithm::Hdrf,
        Algorithm::Dbh,
    ];
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "2ps-l" => Ok(Algorithm::TwoPsL),
            "2ps-hdrf" => Ok(Algorithm::TwoPsHdrf),
            "hdrf" => Ok(Algorithm::Hdrf),
            "dbh" => Ok(Algorithm::Dbh),
            other => Err(format!(
                "unknown algorithm {other:?} (expected 2ps-l, 2ps-hdrf, hdrf or dbh)"
            )),
        }
    }
}

/// Partitioning parameters. Paths and presentation live with the CLI.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Number of partitions, at least 2.
    pub k: u32,
    /// Balance factor: no partition exceeds ⌊α·|E|/k⌋ edges (subject to the
    /// ⌈|E|/k⌉ feasibility floor).
    pub alpha: f64,
    /// Clustering passes; 1 means no re-streaming.
    pub passes: u32,
    /// Cluster volume cap as a multiple of 2|E|/k.
    pub cap_factor: f64,
    pub algorithm: Algorithm,
    /// HDRF balance weight.
    pub lambda: f64,
    /// Seed for the hashing fallback paths.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            k: 2,
            alpha: 1.05,
            passes: 1,
            cap_factor: 1.0,
            algorithm: Algorithm::TwoPsL,
            lambda: 1.1,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::invalid_config(
                "k",
                format!("must be at least 2, got {}", self.k),
            ));
        }
        if !self.alpha.is_finite() || self.alpha < 1.0 {
            return Err(Error::invalid_config(
                "alpha",
                format!("must be a finite value >= 1, got {}", self.alpha),
            ));
        }
        if self.passes < 1 {
            return Err(Error::invalid_config("passes", "must be at least 1"));
        }
        if !self.cap_factor.is_finite() || self.cap_factor <= 0.0 {
            return Err(Error::invalid_config(
                "cap_factor",
                format!("must be a finite value > 0, got {}", self.cap_factor),
            ));
        }
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(Error::invalid_config(
                "lambda",
                format!("must be a finite value >= 0, got {}", self.lambda),
            ));
        }
        Ok(())
    }
}
