//! Box approximations `beta(n, m)` of the bound functions `f_kappa(n)` and
//! the open-ended streams that compute them in the limit.
//!
//! For a box `[0, m]^n`, `beta(n, m)` is the least `b` such that every system
//! over `n` variables with at least one and fewer than `kappa` solutions in the
//! box has one of them in `[0, b]^n`. As `m` grows the values eventually settle
//! at `f_kappa(n)`, but no computable bound on when that happens is known, so
//! streams only report how long the current value has been stable.

mod duplicate;
mod scan;
mod stream;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::system::SystemError;

pub use duplicate::is_duplicate;
pub use scan::{beta, beta2, beta_kappa, beta_omega1, TypeTable};
pub use stream::{f_stream, read_cache, LimitCache, LimitStream, StreamItem};

#[derive(Error, Debug)]
pub enum EnumError {
    #[error("kappa must be at least 2, got {0}")]
    InvalidKappa(u32),
    #[error("box [0,{m}]^{n} has {tuples} tuples, above the limit of {limit}")]
    BoxTooLarge {
        n: usize,
        m: u64,
        tuples: u128,
        limit: u128,
    },
    #[error("{subsets} candidate solution sets exceed the limit of {limit}")]
    TooManySubsets { subsets: u128, limit: u128 },
    #[error("n must be positive")]
    ZeroVariables,
    #[error("cache {path}: {reason}; rerun with restart to discard it")]
    CorruptCache { path: String, reason: String },
    #[error("cache io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("invalid mode `{0}` (expected `kappa(<k>)` or `omega1`)")]
    InvalidMode(String),
}

/// Which bound function a stream approximates. `kappa(k)` counts systems with
/// fewer than `k` solutions in the box; `omega1` places no limit on the count.
/// A finite box never distinguishes "finitely many" from "any number", so
/// there is no separate mode for it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Mode {
    Kappa(u32),
    Omega1,
}

impl Mode {
    pub fn validate(self) -> Result<Self, EnumError> {
        match self {
            Mode::Kappa(k) if k < 2 => Err(EnumError::InvalidKappa(k)),
            _ => Ok(self),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Kappa(k) => write!(f, "kappa({k})"),
            Mode::Omega1 => write!(f, "omega1"),
        }
    }
}

impl FromStr for Mode {
    type Err = EnumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "omega1" {
            return Ok(Mode::Omega1);
        }
        s.strip_prefix("kappa(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|k| k.parse::<u32>().ok())
            .map(Mode::Kappa)
            .ok_or_else(|| EnumError::InvalidMode(s.to_string()))?
            .validate()
    }
}

impl TryFrom<String> for Mode {
    type Error = EnumError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Mode> for String {
    fn from(m: Mode) -> String {
        m.to_string()
    }
}

/// One computed value `beta(n, m)` in a given mode; also the cache line format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaRecord {
    pub n: usize,
    pub mode: Mode,
    pub m: u64,
    pub value: u64,
}

/// Limits and parallelism for box scans. The worker count never changes a
/// result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanConfig {
    pub workers: usize,
    pub max_box_tuples: u128,
    pub max_subsets: u128,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            workers: 1,
            max_box_tuples: 1 << 20,
            max_subsets: 20_000_000,
        }
    }
}

impl ScanConfig {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }
}
