//! Every oracle suite at reduced sample counts: zero counterexamples and
//! deterministic reports. The CLI acceptance tests run the full counts.

use ifmon::oracle::{run_suite, OracleConfig, SUITE_NAMES};

fn small() -> OracleConfig {
    OracleConfig { samples: 60, ..OracleConfig::default() }
}

#[test]
fn every_suite_is_clean_at_small_counts() {
    for name in SUITE_NAMES {
        let report = run_suite(name, &small()).expect("known suite");
        assert_eq!(report.suite, *name);
        assert!(
            report.passed(),
            "suite {name} found counterexamples: {:#?}",
            report.counterexamples,
        );
        assert!(report.totals.samples > 0, "suite {name} ran no samples");
    }
}

#[test]
fn reports_are_deterministic() {
    for name in ["theorem1", "soundness-i", "monotone"] {
        let a = serde_json::to_string(&run_suite(name, &small()).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(name, &small()).unwrap()).unwrap();
        let c = serde_json::to_string(
            &run_suite(name, &OracleConfig { parallel: false, ..small() }).unwrap(),
        )
        .unwrap();
        assert_eq!(a, b, "suite {name} not replayable");
        assert_eq!(a, c, "suite {name} differs between parallel and sequential");
    }
}

#[test]
fn unknown_suite_is_rejected() {
    assert!(run_suite("nope", &OracleConfig::default()).is_err());
}

#[test]
fn skip_rates_stay_low() {
    for name in ["theorem1", "soundness-d", "soundness-m", "soundness-i"] {
        let report = run_suite(name, &small()).unwrap();
        let skipped = report.totals.skipped as f64;
        let total = report.totals.samples as f64;
        assert!(
            skipped / total < 0.2,
            "suite {name} skipped {skipped} of {total} samples",
        );
    }
}
