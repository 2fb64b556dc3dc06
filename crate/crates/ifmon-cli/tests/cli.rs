//! Binary-level contract: exit codes, JSON shape, stdout determinism,
//! and state-file handling.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn workspace_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn ifmon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ifmon"))
        .args(args)
        .current_dir(workspace_path(""))
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("binary exits")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&ifmon(&["--help"])), 0);
    assert_eq!(code(&ifmon(&["--version"])), 0);
    assert_eq!(code(&ifmon(&["run", "--help"])), 0);
}

#[test]
fn missing_and_malformed_arguments_exit_three() {
    assert_eq!(code(&ifmon(&[])), 3);
    assert_eq!(code(&ifmon(&["run"])), 3);
    assert_eq!(code(&ifmon(&["frobnicate"])), 3);
    assert_eq!(
        code(&ifmon(&["run", "--program", "programs/direct_leak.ifm", "--monitor", "q"])),
        3
    );
}

#[test]
fn parse_errors_report_position_and_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ifm");
    std::fs::write(&path, "x := ;\n").unwrap();
    let out = ifmon(&["run", "--program", path.to_str().unwrap(), "--monitor", "d"]);
    assert_eq!(code(&out), 3);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("line 1"), "stderr: {stderr}");
    assert!(stderr.contains("column"), "stderr: {stderr}");
}

#[test]
fn binding_an_unknown_variable_exits_three() {
    let out = ifmon(&[
        "run",
        "--program",
        "programs/direct_leak.ifm",
        "--monitor",
        "d",
        "--state",
        "nosuchvar=1",
    ]);
    assert_eq!(code(&out), 3);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("nosuchvar"), "stderr: {stderr}");
}

#[test]
fn faulting_run_exits_one_with_fault_verdict() {
    let out = ifmon(&["run", "--program", "programs/direct_leak.ifm", "--monitor", "d"]);
    assert_eq!(code(&out), 1);
    let json = stdout_json(&out);
    assert_eq!(json["verdict"], "fault");
    assert_eq!(json["final_formulas"], "fault");
}

#[test]
fn exhausted_budget_exits_two_with_null_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spin.ifm");
    std::fs::write(&path, "while 0 < 1 do {\n  x := x + 1\n}\n").unwrap();
    let out = ifmon(&["run", "--program", path.to_str().unwrap(), "--monitor", "d", "--fuel", "5"]);
    assert_eq!(code(&out), 2);
    let json = stdout_json(&out);
    assert_eq!(json["verdict"], "budget-exhausted");
    assert!(json["final_state"].is_null());
    assert!(json["final_formulas"].is_null());
}

#[test]
fn state_file_binds_variables_and_inline_bindings_win() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bindings");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "# initial state for the seed example").unwrap();
    writeln!(f).unwrap();
    writeln!(f, "seed = 3").unwrap();
    writeln!(f, "secret_conf = 0").unwrap();
    writeln!(f, "secret_base = 2").unwrap();
    drop(f);
    let out = ifmon(&[
        "run",
        "--program",
        "programs/prng_seed_step.ifm",
        "--monitor",
        "i",
        "--state-file",
        path.to_str().unwrap(),
        "--state",
        "secret_conf=1,secret_number=5",
    ]);
    assert_eq!(code(&out), 0);
    let json = stdout_json(&out);
    assert_eq!(json["final_state"]["seed"], 4);
    assert_eq!(json["final_state"]["secret_conf"], 1, "inline binding overrides the file");
    assert_eq!(json["final_state"]["secret_number"], 5);
    assert_eq!(json["final_state"]["b"], 5, "then-branch ran");
}

#[test]
fn compare_reports_all_three_monitors_and_propagates_fault() {
    let out = ifmon(&[
        "compare",
        "--program",
        "programs/prng_seed_step.ifm",
        "--state",
        "seed=3,secret_conf=1,secret_base=2,secret_number=5",
    ]);
    assert_eq!(code(&out), 1, "two of three monitors fault");
    let json = stdout_json(&out);
    let monitors = json["monitors"].as_array().unwrap();
    assert_eq!(monitors.len(), 3);
    let verdicts: Vec<&str> =
        monitors.iter().map(|m| m["verdict"].as_str().unwrap()).collect();
    assert_eq!(verdicts, ["fault", "fault", "pass"]);
}

#[test]
fn unknown_suite_and_bad_config_exit_three() {
    let out = ifmon(&["oracle", "--suite", "nosuch"]);
    assert_eq!(code(&out), 3);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("nosuch"), "stderr: {stderr}");
    assert_eq!(code(&ifmon(&["oracle", "--suite", "theorem1", "--vars", "9"])), 3);
    assert_eq!(code(&ifmon(&["oracle", "--suite", "theorem1", "--range", "5..1"])), 3);
    assert_eq!(code(&ifmon(&["oracle", "--suite", "theorem1", "--range", "oops"])), 3);
}

#[test]
fn clean_suite_exits_zero_and_stdout_is_deterministic() {
    let args =
        ["oracle", "--suite", "soundness-i", "--samples", "25", "--seed", "11", "--depth", "3"];
    let first = ifmon(&args);
    assert_eq!(code(&first), 0);
    let second = ifmon(&args);
    let mut sequential = args.to_vec();
    sequential.push("--sequential");
    let third = ifmon(&sequential);
    assert_eq!(first.stdout, second.stdout, "same seed must give identical bytes");
    assert_eq!(first.stdout, third.stdout, "parallel and sequential sweeps must agree");
    let json = stdout_json(&first);
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["config"]["seed"], 11);
    assert_eq!(json["counterexamples"].as_array().unwrap().len(), 0);
}

#[test]
fn run_report_never_pairs_fault_verdict_with_clean_formulas() {
    for program in ["high_branch_then_constant.ifm", "direct_leak.ifm", "equal_branches_wrapped.ifm"]
    {
        for kind in ["d", "m", "i"] {
            let out = ifmon(&[
                "run",
                "--program",
                &format!("programs/{program}"),
                "--monitor",
                kind,
                "--state",
                "",
            ]);
            let json = stdout_json(&out);
            let faulted = json["final_formulas"] == "fault";
            assert_eq!(
                json["verdict"] == "fault",
                faulted,
                "{program} under {kind}: {json}"
            );
            assert_eq!(code(&out), i32::from(faulted));
        }
    }
}
