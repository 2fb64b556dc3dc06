//! Full-scale acceptance gate. Each test exercises one advertised
//! behavior end to end (library and, where it matters, the installed
//! binary), asserts the expected outcome and its time budget, and prints
//! a single verdict line.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use ifmon::intervals::Interval;
use ifmon::lang::{parse_bool, parse_expr};
use ifmon::oracle::{run_suite, OracleConfig, SuiteReport};
use ifmon::{
    collect_lattice, monitor, parse_program, tini_holds, universe, wrap_policy, BasicFormula, Cmd,
    FormulaSet, Fuel, Lattice, MonitorKind, Policy, State,
};

fn workspace_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn load(name: &str) -> (Cmd, Lattice) {
    let path = workspace_path(&format!("programs/{name}"));
    let src = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let c = parse_program(&src).expect("example program parses");
    let lat = collect_lattice(&c);
    (c, lat)
}

fn st(pairs: &[(&str, i64)]) -> State {
    State::from_pairs(pairs.iter().map(|(k, v)| (k.to_string(), *v)))
}

fn agree(src: &str) -> BasicFormula {
    BasicFormula::Agree(parse_expr(src).unwrap())
}

fn both(src: &str) -> BasicFormula {
    BasicFormula::Both(parse_bool(src).unwrap())
}

fn fs(items: &[BasicFormula]) -> FormulaSet {
    FormulaSet::from_iter(items.iter().cloned())
}

/// Runs the installed binary and returns (exit code, stdout as JSON).
fn run_binary(args: &[&str]) -> (i32, serde_json::Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_ifmon"))
        .args(args)
        .current_dir(workspace_path(""))
        .output()
        .expect("binary runs");
    let code = out.status.code().expect("binary exits");
    let stdout = String::from_utf8(out.stdout).expect("stdout is utf-8");
    let json = if stdout.trim().is_empty() {
        serde_json::Value::Null
    } else {
        serde_json::from_str(&stdout).expect("stdout is JSON")
    };
    (code, json)
}

fn suite_at(name: &str, cfg: &OracleConfig, budget_s: u64) -> SuiteReport {
    let start = Instant::now();
    let report = run_suite(name, cfg).expect("known suite");
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < budget_s,
        "suite {name} took {elapsed:?}, budget {budget_s}s"
    );
    assert_eq!(report.totals.failed, 0, "suite {name}: {report:?}");
    assert!(report.passed(), "suite {name} reported counterexamples");
    report
}

fn verdict(n: u32, what: &str, start: Instant) {
    println!("criterion {n:02} PASS {what} ({} ms)", start.elapsed().as_millis());
}

/// Consecutive-duplicate-free formula progression of a monitor trace.
fn progression(run: &ifmon::MonitorRun) -> Vec<FormulaSet> {
    let mut out: Vec<FormulaSet> = Vec::new();
    for entry in &run.trace {
        if out.last() != Some(&entry.formulas) {
            out.push(entry.formulas.clone());
        }
    }
    out
}

#[test]
fn criterion_01_dynamic_trace_is_exact_on_branch_then_constant() {
    let start = Instant::now();
    let (c, lat) = load("high_branch_then_constant.ifm");
    let sigma = st(&[("secret", 1), ("public", 0), ("y", 0)]);
    let run = monitor(
        MonitorKind::PurelyDynamic,
        &c,
        &sigma,
        &FormulaSet::empty(),
        &lat,
        &mut Fuel::default(),
    )
    .expect("run fits the default budget");
    assert!(run.passed());
    let expected = vec![
        fs(&[agree("public")]),
        fs(&[agree("public"), both("secret > 0")]),
        FormulaSet::empty(),
        fs(&[agree("y")]),
    ];
    assert_eq!(progression(&run), expected, "trace:\n{:#?}", run.trace);
    assert_eq!(run.formulas, fs(&[agree("y")]));

    let (code, json) = run_binary(&[
        "run",
        "--program",
        "programs/high_branch_then_constant.ifm",
        "--monitor",
        "d",
        "--state",
        "secret=1,public=0",
        "--trace",
    ]);
    assert_eq!(code, 0);
    assert_eq!(json["verdict"], "pass");
    assert_eq!(json["final_formulas"], "{A y}");
    assert!(start.elapsed().as_secs() < 1, "took {:?}", start.elapsed());
    verdict(1, "purely dynamic trace exact on the branch-then-constant example", start);
}

#[test]
fn criterion_02_interval_monitor_recovers_seed_where_modified_vars_faults() {
    let start = Instant::now();
    let (c, lat) = load("prng_seed_step.ifm");
    let sigma = st(&[
        ("seed", 3),
        ("secret_conf", 1),
        ("secret_base", 2),
        ("secret_number", 5),
        ("a", 0),
        ("b", 0),
        ("r", 0),
    ]);
    let hybrid = monitor(
        MonitorKind::IntervalHybrid { widen_after: 3 },
        &c,
        &sigma,
        &FormulaSet::empty(),
        &lat,
        &mut Fuel::default(),
    )
    .unwrap();
    assert!(hybrid.passed());
    assert_eq!(hybrid.formulas, fs(&[agree("seed")]));
    let merge = hybrid
        .trace
        .iter()
        .find(|t| t.untaken.is_some())
        .expect("merge entry carries untaken-branch intervals");
    assert_eq!(merge.formulas, fs(&[agree("seed")]));
    let info = merge.untaken.as_ref().unwrap();
    assert_eq!(info.entry.get("seed"), Interval::singleton(3));
    assert_eq!(info.exit.get("seed"), Interval::singleton(4));

    let modified = monitor(
        MonitorKind::ModifiedVars,
        &c,
        &sigma,
        &FormulaSet::empty(),
        &lat,
        &mut Fuel::default(),
    )
    .unwrap();
    assert!(!modified.passed(), "modified-variables monitor must fault here");

    let state = "seed=3,secret_conf=1,secret_base=2,secret_number=5";
    let (code, json) = run_binary(&[
        "run",
        "--program",
        "programs/prng_seed_step.ifm",
        "--monitor",
        "i",
        "--state",
        state,
        "--trace",
    ]);
    assert_eq!(code, 0);
    assert_eq!(json["verdict"], "pass");
    let untaken = json["trace"]
        .as_array()
        .unwrap()
        .iter()
        .find_map(|t| t.get("untaken").filter(|u| !u.is_null()))
        .expect("trace carries untaken intervals");
    assert_eq!(untaken["entry"]["vars"]["seed"], "[3, 3]");
    assert_eq!(untaken["exit"]["vars"]["seed"], "[4, 4]");
    let (code, _) = run_binary(&[
        "run",
        "--program",
        "programs/prng_seed_step.ifm",
        "--monitor",
        "m",
        "--state",
        state,
    ]);
    assert_eq!(code, 1);
    assert!(start.elapsed().as_secs() < 1, "took {:?}", start.elapsed());
    verdict(2, "interval hybrid recovers seed agreement; modified-variables faults", start);
}

#[test]
fn criterion_03_equal_branches_is_secure_but_dynamic_monitor_faults() {
    let start = Instant::now();
    let (c, _) = load("equal_branches.ifm");
    let policy = Policy::new(Vec::new(), vec!["outlo".to_string()]);
    let vars: BTreeSet<String> = c.vars();
    let states = universe(&vars, 0, 1);
    let wrapped = wrap_policy(&c, &policy);
    let wrapped_lat = collect_lattice(&wrapped);
    for sigma1 in &states {
        let secure = tini_holds(&c, &policy, sigma1, &states, Fuel::DEFAULT)
            .expect("both branches terminate");
        assert!(secure, "noninterference must hold at {sigma1:?}");
        let run = monitor(
            MonitorKind::PurelyDynamic,
            &wrapped,
            sigma1,
            &FormulaSet::empty(),
            &wrapped_lat,
            &mut Fuel::default(),
        )
        .unwrap();
        assert!(!run.passed(), "dynamic monitor must fault at {sigma1:?}");
    }
    assert!(start.elapsed().as_secs() < 1, "took {:?}", start.elapsed());
    verdict(3, "equal-branches program secure at every state yet faults dynamically", start);
}

#[test]
fn criterion_04_ideal_monitor_matches_brute_force_noninterference() {
    let start = Instant::now();
    let cfg = OracleConfig::default();
    assert_eq!((cfg.vars, cfg.lo, cfg.hi, cfg.depth), (3, 0, 2, 4));
    assert!(cfg.samples >= 500);
    let report = suite_at("theorem1", &cfg, 60);
    assert!(
        report.totals.skipped * 5 < report.totals.samples,
        "too many skips: {:?}",
        report.totals
    );
    verdict(4, "ideal monitor equals brute-force noninterference on 500 programs", start);
}

#[test]
fn criterion_05_abstraction_maps_form_an_exact_galois_connection() {
    let start = Instant::now();
    let report = suite_at("galois", &OracleConfig::default(), 30);
    assert_eq!(report.totals.skipped, 0);
    assert!(report.totals.samples > 10_000, "exhaustive sweep looks truncated: {:?}", report.totals);
    verdict(5, "adjunction, additivity, and multiplicativity hold exhaustively", start);
}

#[test]
fn criterion_06_all_three_monitors_are_sound() {
    let start = Instant::now();
    let cfg = OracleConfig::default();
    for name in ["soundness-d", "soundness-m", "soundness-i"] {
        let inner = Instant::now();
        let report = suite_at(name, &cfg, 120);
        assert!(report.totals.samples >= 500);
        assert!(
            report.totals.skipped * 5 < report.totals.samples,
            "{name}: too many skips: {:?}",
            report.totals
        );
        println!("  {name}: {} samples in {} ms", report.totals.samples, inner.elapsed().as_millis());
    }
    verdict(6, "dynamic, modified-variables, and interval monitors over-approximate the ideal", start);
}

#[test]
fn criterion_07_interval_and_formula_views_translate_without_loss() {
    let start = Instant::now();
    let report = suite_at("granger", &OracleConfig::default(), 60);
    assert_eq!(report.totals.skipped, 0);
    verdict(7, "interval/formula translations preserve meaning and reduce exhaustively", start);
}

#[test]
fn criterion_08_interval_execution_is_sound_and_arithmetic_is_exact() {
    let start = Instant::now();
    let cfg = OracleConfig { samples: 1000, ..OracleConfig::default() };
    let report = suite_at("interval-sound", &cfg, 60);
    assert!(report.totals.samples > 1000, "arithmetic sweep missing: {:?}", report.totals);
    verdict(8, "interval transfer contains every concrete run; arithmetic matches exact hulls", start);
}

#[test]
fn criterion_09_collecting_semantics_agrees_with_pointwise_and_tracking() {
    let start = Instant::now();
    let cfg = OracleConfig { samples: 300, ..OracleConfig::default() };
    suite_at("lemma1", &cfg, 60);
    suite_at("monstatic", &cfg, 60);
    verdict(9, "collecting semantics matches pointwise runs and ideal tracking", start);
}

#[test]
fn criterion_10_ideal_monitor_is_monotone_in_the_tracking_set() {
    let start = Instant::now();
    let report = suite_at("monotone", &OracleConfig::default(), 30);
    assert!(report.totals.samples >= 500);
    verdict(10, "larger tracking sets never produce smaller ideal results", start);
}
