//! Machine-readable reports for oracle suite runs.
//!
//! Reports are deterministic for a fixed (suite, config) pair: totals and
//! counterexamples are merged in sample order and carry no wall-clock
//! data, so identical inputs serialize byte-identically.

use serde::Serialize;

use super::OracleConfig;

pub const SCHEMA_VERSION: u32 = 1;

/// How many counterexamples a report keeps verbatim; the failure count in
/// totals is exact regardless.
pub const COUNTEREXAMPLE_CAP: usize = 8;

/// Outcome of one oracle suite run.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub config: ConfigEcho,
    pub totals: Totals,
    pub counterexamples: Vec<Counterexample>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.totals.failed == 0
    }
}

/// The configuration a suite ran under, echoed for reproducibility.
#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub vars: usize,
    pub lo: i64,
    pub hi: i64,
    pub depth: u32,
    pub samples: u64,
    pub seed: u64,
    pub fuel: u64,
    pub widen_after: u32,
}

impl ConfigEcho {
    pub fn of(cfg: &OracleConfig) -> ConfigEcho {
        ConfigEcho {
            vars: cfg.vars,
            lo: cfg.lo,
            hi: cfg.hi,
            depth: cfg.depth,
            samples: cfg.samples,
            seed: cfg.seed,
            fuel: cfg.fuel,
            widen_after: cfg.widen_after,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Totals {
    pub samples: u64,
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
}

/// A self-contained repro: the program text plus every input and both
/// sides of the violated relation, rendered in source syntax.
#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub index: u64,
    pub program: String,
    pub detail: String,
}

/// Per-sample verdict produced by a suite body.
#[derive(Clone, Debug)]
pub enum Verdict {
    Pass,
    Fail { program: String, detail: String },
    Skip,
}

/// Folds ordered verdicts into totals plus the first few counterexamples.
pub fn tally(verdicts: Vec<Verdict>) -> (Totals, Vec<Counterexample>) {
    let mut totals = Totals::default();
    let mut kept = Vec::new();
    for (index, v) in verdicts.into_iter().enumerate() {
        totals.samples += 1;
        match v {
            Verdict::Pass => totals.passed += 1,
            Verdict::Skip => totals.skipped += 1,
            Verdict::Fail { program, detail } => {
                totals.failed += 1;
                if kept.len() < COUNTEREXAMPLE_CAP {
                    kept.push(Counterexample { index: index as u64, program, detail });
                }
            }
        }
    }
    (totals, kept)
}
