//! Command-line front end: monitored runs, three-monitor comparison, and
//! the oracle property suites.
//!
//! JSON goes to stdout; human-readable diagnostics and tables go to
//! stderr. Exit codes: 0 pass, 1 fault (or any counterexample), 2 budget
//! exhaustion, 3 usage or input errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::Serialize;

use ifmon::monitors::{MonitorRun, TraceEntry, UntakenIntervals};
use ifmon::oracle::{run_suite, OracleConfig, SuiteReport};
use ifmon::{
    collect_lattice, monitor, parse_program, Cmd, Exhausted, FormulaSet, Fuel, Lattice,
    MonitorKind, State,
};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "ifmon", version, about = "Information-flow monitors for an annotated while language")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one monitor on a program and report the verdict.
    Run {
        /// Path to the program source.
        #[arg(long)]
        program: PathBuf,
        /// Which monitor to run: d (purely dynamic), m (modified
        /// variables), or i (interval hybrid).
        #[arg(long, value_parser = ["d", "m", "i"])]
        monitor: String,
        /// Initial state as comma-separated bindings, e.g. x=1,y=0.
        /// Program variables left unbound start at 0.
        #[arg(long)]
        state: Option<String>,
        /// File of bindings, one per line; blank lines and # comments ok.
        #[arg(long)]
        state_file: Option<PathBuf>,
        /// Loop budget for the monitored run.
        #[arg(long, default_value_t = Fuel::DEFAULT)]
        fuel: u64,
        /// Loop unrollings before the interval monitor widens.
        #[arg(long, default_value_t = 3)]
        widen_after: u32,
        /// Include the full formula-set trace in the report.
        #[arg(long)]
        trace: bool,
    },
    /// Run all three monitors on identical inputs, side by side.
    Compare {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        state: Option<String>,
        #[arg(long)]
        state_file: Option<PathBuf>,
        #[arg(long, default_value_t = Fuel::DEFAULT)]
        fuel: u64,
        #[arg(long, default_value_t = 3)]
        widen_after: u32,
    },
    /// Run a property suite and report counterexamples.
    Oracle {
        /// Suite name; see the suite list in the long help.
        #[arg(long)]
        suite: String,
        /// Number of program variables for generated samples (1..=3).
        #[arg(long, default_value_t = 3)]
        vars: usize,
        /// Inclusive value range for enumerated universes, as LO..HI.
        #[arg(long, default_value = "0..2")]
        range: String,
        /// Depth bound for generated programs.
        #[arg(long, default_value_t = 4)]
        depth: u32,
        /// Sample count for the sampled suites.
        #[arg(long, default_value_t = 500)]
        samples: u64,
        /// Seed for the sample generators.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = Fuel::DEFAULT)]
        fuel: u64,
        #[arg(long, default_value_t = 3)]
        widen_after: u32,
        /// Evaluate samples on one thread.
        #[arg(long)]
        sequential: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.cmd {
        Command::Run { program, monitor, state, state_file, fuel, widen_after, trace } => {
            cmd_run(&program, &monitor, state.as_deref(), state_file.as_deref(), fuel, widen_after, trace)
        }
        Command::Compare { program, state, state_file, fuel, widen_after } => {
            cmd_compare(&program, state.as_deref(), state_file.as_deref(), fuel, widen_after)
        }
        Command::Oracle { suite, vars, range, depth, samples, seed, fuel, widen_after, sequential } => {
            cmd_oracle(&suite, vars, &range, depth, samples, seed, fuel, widen_after, sequential)
        }
    };
    ExitCode::from(code)
}

/// Usage-level failure: message to stderr, exit 3.
struct Usage(String);

fn load_program(path: &Path) -> Result<(Cmd, Lattice), Usage> {
    let source = std::fs::read_to_string(path)
        .map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
    let program = parse_program(&source)
        .map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    let lattice = collect_lattice(&program);
    Ok((program, lattice))
}

fn parse_binding(raw: &str) -> Result<(String, i64), Usage> {
    let (name, value) = raw
        .split_once('=')
        .ok_or_else(|| Usage(format!("binding {raw:?} is not of the form name=value")))?;
    let v: i64 = value
        .trim()
        .parse()
        .map_err(|_| Usage(format!("binding {raw:?} has a non-integer value")))?;
    Ok((name.trim().to_string(), v))
}

/// Builds the initial state: every program variable starts at 0, then the
/// state file and inline bindings apply in that order. Binding a name the
/// program never mentions is a usage error.
fn build_state(
    program: &Cmd,
    inline: Option<&str>,
    file: Option<&Path>,
) -> Result<State, Usage> {
    let vars = program.vars();
    let mut sigma = State::from_pairs(vars.iter().map(|x| (x.clone(), 0)));
    let mut bind = |raw: &str| -> Result<(), Usage> {
        let (name, v) = parse_binding(raw)?;
        if !vars.contains(&name) {
            return Err(Usage(format!("variable {name:?} does not occur in the program")));
        }
        sigma.set(&name, v);
        Ok(())
    };
    if let Some(path) = file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            bind(line)?;
        }
    }
    if let Some(raw) = inline {
        for part in raw.split(',') {
            let part = part.trim();
            if !part.is_empty() {
                bind(part)?;
            }
        }
    }
    Ok(sigma)
}

fn monitor_kind(name: &str, widen_after: u32) -> MonitorKind {
    match name {
        "d" => MonitorKind::PurelyDynamic,
        "m" => MonitorKind::ModifiedVars,
        _ => MonitorKind::IntervalHybrid { widen_after },
    }
}

#[derive(Serialize)]
struct EnvJson {
    kind: &'static str,
    vars: BTreeMap<String, String>,
}

impl EnvJson {
    fn of(env: &ifmon::intervals::IntervalEnv) -> EnvJson {
        use ifmon::intervals::IntervalEnv;
        match env {
            IntervalEnv::Bottom => EnvJson { kind: "bottom", vars: BTreeMap::new() },
            IntervalEnv::Fault => EnvJson { kind: "fault", vars: BTreeMap::new() },
            IntervalEnv::Env(map) => EnvJson {
                kind: "env",
                vars: map.iter().map(|(x, i)| (x.clone(), i.to_string())).collect(),
            },
        }
    }
}

#[derive(Serialize)]
struct UntakenJson {
    entry: EnvJson,
    exit: EnvJson,
}

#[derive(Serialize)]
struct TraceJson {
    label: String,
    state: BTreeMap<String, i64>,
    formulas: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    untaken: Option<UntakenJson>,
}

#[derive(Serialize)]
struct RunReportJson {
    schema_version: u32,
    program: String,
    monitor: String,
    verdict: &'static str,
    final_state: Option<BTreeMap<String, i64>>,
    final_formulas: Option<String>,
    trace: Vec<TraceJson>,
    timing_ms: u128,
}

fn state_json(sigma: &State) -> BTreeMap<String, i64> {
    sigma.iter().map(|(x, v)| (x.clone(), *v)).collect()
}

fn trace_json(entry: &TraceEntry) -> TraceJson {
    TraceJson {
        label: entry.label.clone(),
        state: state_json(&entry.state),
        formulas: entry.formulas.to_string(),
        untaken: entry.untaken.as_ref().map(|UntakenIntervals { entry, exit }| UntakenJson {
            entry: EnvJson::of(entry),
            exit: EnvJson::of(exit),
        }),
    }
}

fn verdict_of(run: &MonitorRun) -> &'static str {
    if run.passed() {
        "pass"
    } else {
        "fault"
    }
}

fn emit(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    program_path: &Path,
    monitor_name: &str,
    inline: Option<&str>,
    state_file: Option<&Path>,
    fuel: u64,
    widen_after: u32,
    trace: bool,
) -> u8 {
    let (report, code) =
        match run_report(program_path, monitor_name, inline, state_file, fuel, widen_after, trace) {
            Ok(pair) => pair,
            Err(Usage(msg)) => {
                eprintln!("error: {msg}");
                return 3;
            }
        };
    emit(&report);
    eprintln!(
        "{}: monitor {} -> {}{}",
        program_path.display(),
        monitor_name,
        report.verdict,
        report.final_formulas.as_deref().map(|f| format!(" with {f}")).unwrap_or_default(),
    );
    code
}

fn run_report(
    program_path: &Path,
    monitor_name: &str,
    inline: Option<&str>,
    state_file: Option<&Path>,
    fuel: u64,
    widen_after: u32,
    trace: bool,
) -> Result<(RunReportJson, u8), Usage> {
    if fuel == 0 {
        return Err(Usage("fuel must be at least 1".to_string()));
    }
    if widen_after == 0 {
        return Err(Usage("widen-after must be at least 1".to_string()));
    }
    let (program, lattice) = load_program(program_path)?;
    let sigma = build_state(&program, inline, state_file)?;
    let kind = monitor_kind(monitor_name, widen_after);
    let start = Instant::now();
    let outcome = monitor(kind, &program, &sigma, &FormulaSet::empty(), &lattice, &mut Fuel::new(fuel));
    let timing_ms = start.elapsed().as_millis();
    let report = match &outcome {
        Ok(run) => RunReportJson {
            schema_version: SCHEMA_VERSION,
            program: program_path.display().to_string(),
            monitor: monitor_name.to_string(),
            verdict: verdict_of(run),
            final_state: Some(state_json(&run.state)),
            final_formulas: Some(run.formulas.to_string()),
            trace: if trace { run.trace.iter().map(trace_json).collect() } else { Vec::new() },
            timing_ms,
        },
        Err(Exhausted) => RunReportJson {
            schema_version: SCHEMA_VERSION,
            program: program_path.display().to_string(),
            monitor: monitor_name.to_string(),
            verdict: "budget-exhausted",
            final_state: None,
            final_formulas: None,
            trace: Vec::new(),
            timing_ms,
        },
    };
    let code = match &outcome {
        Ok(run) if run.passed() => 0,
        Ok(_) => 1,
        Err(Exhausted) => 2,
    };
    Ok((report, code))
}

#[derive(Serialize)]
struct CompareEntryJson {
    monitor: &'static str,
    verdict: &'static str,
    final_formulas: Option<String>,
    timing_ms: u128,
}

#[derive(Serialize)]
struct CompareReportJson {
    schema_version: u32,
    program: String,
    state: BTreeMap<String, i64>,
    monitors: Vec<CompareEntryJson>,
}

fn cmd_compare(
    program_path: &Path,
    inline: Option<&str>,
    state_file: Option<&Path>,
    fuel: u64,
    widen_after: u32,
) -> u8 {
    let loaded = load_program(program_path).and_then(|(program, lattice)| {
        let sigma = build_state(&program, inline, state_file)?;
        Ok((program, lattice, sigma))
    });
    let (program, lattice, sigma) = match loaded {
        Ok(t) => t,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            return 3;
        }
    };
    let kinds: [(&'static str, MonitorKind); 3] = [
        ("d", MonitorKind::PurelyDynamic),
        ("m", MonitorKind::ModifiedVars),
        ("i", MonitorKind::IntervalHybrid { widen_after }),
    ];
    let mut entries = Vec::new();
    let mut any_fault = false;
    let mut any_budget = false;
    for (name, kind) in kinds {
        let start = Instant::now();
        let outcome = monitor(kind, &program, &sigma, &FormulaSet::empty(), &lattice, &mut Fuel::new(fuel));
        let timing_ms = start.elapsed().as_millis();
        let entry = match outcome {
            Ok(run) => {
                any_fault |= !run.passed();
                CompareEntryJson {
                    monitor: name,
                    verdict: verdict_of(&run),
                    final_formulas: Some(run.formulas.to_string()),
                    timing_ms,
                }
            }
            Err(Exhausted) => {
                any_budget = true;
                CompareEntryJson {
                    monitor: name,
                    verdict: "budget-exhausted",
                    final_formulas: None,
                    timing_ms,
                }
            }
        };
        entries.push(entry);
    }
    eprintln!("{}:", program_path.display());
    eprintln!("  {:<8} {:<17} final formulas", "monitor", "verdict");
    for e in &entries {
        eprintln!(
            "  {:<8} {:<17} {}",
            e.monitor,
            e.verdict,
            e.final_formulas.as_deref().unwrap_or("-"),
        );
    }
    emit(&CompareReportJson {
        schema_version: SCHEMA_VERSION,
        program: program_path.display().to_string(),
        state: state_json(&sigma),
        monitors: entries,
    });
    if any_fault {
        1
    } else if any_budget {
        2
    } else {
        0
    }
}

fn parse_range(raw: &str) -> Result<(i64, i64), Usage> {
    let (lo, hi) = raw
        .split_once("..")
        .ok_or_else(|| Usage(format!("range {raw:?} is not of the form LO..HI")))?;
    let lo: i64 = lo.trim().parse().map_err(|_| Usage(format!("bad range start in {raw:?}")))?;
    let hi: i64 = hi.trim().parse().map_err(|_| Usage(format!("bad range end in {raw:?}")))?;
    Ok((lo, hi))
}

fn summarize(report: &SuiteReport, elapsed_ms: u128) -> String {
    format!(
        "suite {}: {} samples, {} passed, {} failed, {} skipped ({elapsed_ms} ms)",
        report.suite,
        report.totals.samples,
        report.totals.passed,
        report.totals.failed,
        report.totals.skipped,
    )
}

#[allow(clippy::too_many_arguments)]
fn cmd_oracle(
    suite: &str,
    vars: usize,
    range: &str,
    depth: u32,
    samples: u64,
    seed: u64,
    fuel: u64,
    widen_after: u32,
    sequential: bool,
) -> u8 {
    let (lo, hi) = match parse_range(range) {
        Ok(pair) => pair,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            return 3;
        }
    };
    let cfg = OracleConfig {
        vars,
        lo,
        hi,
        depth,
        samples,
        seed,
        fuel,
        widen_after,
        parallel: !sequential,
    };
    if let Err(msg) = cfg.validate() {
        eprintln!("error: {msg}");
        return 3;
    }
    let start = Instant::now();
    let report = match run_suite(suite, &cfg) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return 3;
        }
    };
    let elapsed_ms = start.elapsed().as_millis();
    emit(&report);
    eprintln!("{}", summarize(&report, elapsed_ms));
    u8::from(!report.passed())
}
