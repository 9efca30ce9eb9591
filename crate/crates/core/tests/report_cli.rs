use iwasawa_k1::cyclotomic::CyclotomicElem;
use iwasawa_k1::padic::Modulus;
use iwasawa_k1::report::*;
use iwasawa_k1::Error;
use std::process::Command;

fn config_location(config: &RunConfig) -> String {
    match run_suite(config) {
        Err(Error::Config { location, .. }) => location,
        other => panic!("expected a config error, got {other:?}"),
    }
}

#[test]
fn config_errors_name_their_flag() {
    let base = RunConfig::default();
    assert_eq!(config_location(&RunConfig { prime: 2, ..base.clone() }), "--prime");
    assert_eq!(config_location(&RunConfig { precision: 1, ..base.clone() }), "--precision");
    assert_eq!(config_location(&RunConfig { carrier: "D(3)".into(), ..base.clone() }), "--carrier");
    assert_eq!(config_location(&RunConfig { carrier: "C(5,1)".into(), ..base.clone() }), "--carrier");
    let deep = RunConfig { suites: vec![Suite::Coleman], max_level: 3, ..base.clone() };
    assert_eq!(config_location(&deep), "--max-level");
}

#[test]
fn empty_selection_succeeds_with_no_checks() {
    let report = run_suite(&RunConfig::default()).unwrap();
    assert!(report.records.is_empty());
    assert_eq!(report.summary.total, 0);
    assert!(report.success());
    assert_eq!(report.schema_version, SCHEMA_VERSION);
}

#[test]
fn gamma_suite_passes_and_every_record_has_an_anchor() {
    let config = RunConfig { suites: vec![Suite::Gamma, Suite::Norm], samples: 6, ..RunConfig::default() };
    let report = run_suite(&config).unwrap();
    assert!(report.success(), "{}", report.to_json());
    assert!(report.records.iter().all(|r| !r.anchor.is_empty()));
    assert_eq!(report.config.seed, 0);
}

#[test]
fn mismatched_suite_is_recorded_not_swallowed() {
    let config = RunConfig { suites: vec![Suite::Sk1], ..RunConfig::default() };
    let report = run_suite(&config).unwrap();
    assert!(!report.success());
    assert!(report.records.iter().all(|r| r.status == Status::Error && r.witness.is_some()));
}

#[test]
fn coleman_table_examples() {
    let config = RunConfig { precision: 5, degree: 30, max_level: 2, samples: 1, ..RunConfig::default() };
    let report = coleman_table(&config).unwrap();
    let md = Modulus::new(3, 5).unwrap();
    let row = |label: &str| report.coleman_table.iter().find(|r| r.series == label).unwrap().clone();
    let gen = row("1+T");
    assert!(gen.eigen_residual >= 5);
    for lv in &gen.levels {
        assert_eq!(lv.value, CyclotomicElem::epsilon(md, lv.level).coeffs());
    }
    let teich = row("teich(2)");
    let w = md.teichmuller(2).unwrap();
    for lv in &teich.levels {
        assert_eq!(lv.value, CyclotomicElem::scalar(md, lv.level, w).coeffs());
    }
    assert_eq!(row("1+p").eigen_residual, 1);
}

#[test]
fn det_table_rows() {
    let config = RunConfig { precision: 3, samples: 3, ..RunConfig::default() };
    let report = det_table(&config).unwrap();
    assert_eq!(report.det_table.len(), 5);
    assert!(report.det_table.iter().all(|r| r.h == Some(1)));
    let one = &report.det_table[0];
    assert!(one.det.iter().all(|o| o.value[0] == 1 && o.value[1..].iter().all(|&c| c == 0)));
}

#[test]
fn binary_writes_json_and_csv() {
    let bin = env!("CARGO_BIN_EXE_k1check");
    let out = Command::new(bin).args(["--suite", "gamma", "--samples", "3", "--seed", "5"]).output().unwrap();
    assert!(out.status.success());
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.config.seed, 5);
    assert!(report.summary.total > 0);

    let again = Command::new(bin).args(["--suite", "gamma", "--samples", "3", "--seed", "5"]).output().unwrap();
    assert_eq!(out.stdout, again.stdout);

    let csv = Command::new(bin).args(["--suite", "exp-log", "--format", "csv"]).output().unwrap();
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("suite,name,anchor,status"));
    assert_eq!(text.lines().count(), 3);

    let bad = Command::new(bin).args(["--prime", "2", "--carrier", "C(3,1)"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("--prime"));

    let failing = Command::new(bin).args(["--suite", "sk1"]).output().unwrap();
    assert_eq!(failing.status.code(), Some(1));
}
