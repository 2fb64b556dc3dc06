//! Brute-force oracles for the monitors: seeded random sampling and
//! exhaustive micro-domain enumeration, with deterministic reports.
//!
//! Sample evaluation is pure and index-seeded, so suites shard across
//! threads freely; results are merged in index order either way, and a
//! report depends only on (suite, config).

use std::error::Error;
use std::fmt;

pub mod gen;
pub mod report;
pub mod suites;

pub use report::{Counterexample, SuiteReport, Totals, Verdict};

/// Every suite name `run_suite` accepts, in display order.
pub const SUITE_NAMES: &[&str] = &[
    "galois",
    "lemma1",
    "monstatic",
    "theorem1",
    "soundness-d",
    "soundness-m",
    "soundness-i",
    "granger",
    "interval-sound",
    "monotone",
];

/// Shared knobs for all suites. Exhaustive suites (galois, granger, the
/// arithmetic half of interval-sound) run over pinned micro domains and
/// ignore the variable and range settings.
#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub vars: usize,
    pub lo: i64,
    pub hi: i64,
    pub depth: u32,
    pub samples: u64,
    pub seed: u64,
    pub fuel: u64,
    pub widen_after: u32,
    pub parallel: bool,
}

impl Default for OracleConfig {
    fn default() -> OracleConfig {
        OracleConfig {
            vars: 3,
            lo: 0,
            hi: 2,
            depth: 4,
            samples: 500,
            seed: 1,
            fuel: 10_000,
            widen_after: 3,
            parallel: cfg!(feature = "parallel"),
        }
    }
}

impl OracleConfig {
    /// Bounds that keep universes enumerable and generators sensible.
    pub fn validate(&self) -> Result<(), String> {
        if self.vars == 0 || self.vars > 3 {
            return Err(format!("vars must be between 1 and 3, got {}", self.vars));
        }
        if self.lo > self.hi {
            return Err(format!("empty value range {}..{}", self.lo, self.hi));
        }
        let width = (self.hi - self.lo + 1) as u64;
        if width.pow(self.vars as u32) > 1000 {
            return Err(format!(
                "universe of {} states is too large to enumerate; shrink the range or vars",
                width.pow(self.vars as u32),
            ));
        }
        if self.fuel == 0 {
            return Err("fuel must be at least 1".to_string());
        }
        if self.widen_after == 0 {
            return Err("widen-after must be at least 1".to_string());
        }
        Ok(())
    }
}

/// Asked for a suite that does not exist.
#[derive(Clone, Debug)]
pub struct UnknownSuite(pub String);

impl fmt::Display for UnknownSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown suite {:?}; expected one of {}", self.0, SUITE_NAMES.join(", "))
    }
}

impl Error for UnknownSuite {}

/// Runs one named suite under the given configuration.
pub fn run_suite(name: &str, cfg: &OracleConfig) -> Result<SuiteReport, UnknownSuite> {
    match name {
        "galois" => Ok(suites::galois(cfg)),
        "lemma1" => Ok(suites::lemma1(cfg)),
        "monstatic" => Ok(suites::monstatic(cfg)),
        "theorem1" => Ok(suites::theorem1(cfg)),
        "soundness-d" => Ok(suites::soundness_d(cfg)),
        "soundness-m" => Ok(suites::soundness_m(cfg)),
        "soundness-i" => Ok(suites::soundness_i(cfg)),
        "granger" => Ok(suites::granger(cfg)),
        "interval-sound" => Ok(suites::interval_sound(cfg)),
        "monotone" => Ok(suites::monotone(cfg)),
        other => Err(UnknownSuite(other.to_string())),
    }
}

/// Evaluates `body` for every sample index, in parallel when requested and
/// compiled in; the verdict order is index order either way.
pub(crate) fn sweep<F>(parallel: bool, samples: u64, body: F) -> Vec<Verdict>
where
    F: Fn(u64) -> Verdict + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel {
            use rayon::prelude::*;
            return (0..samples).into_par_iter().map(body).collect();
        }
    }
    let _ = parallel;
    (0..samples).map(body).collect()
}
