use super::*;

fn case(lhs: f64, rhs: f64, tol: f64, rel: Relation) -> Case {
    Case::compare("t", "c", 0.5, 1, lhs, rhs, tol, rel)
}

#[test]
fn close_is_relative_unless_rhs_vanishes() {
    assert!(case(1.0 + 1e-7, 1.0, 1e-6, Relation::Close).pass);
    assert!(!case(1.0 + 1e-5, 1.0, 1e-6, Relation::Close).pass);
    assert!(case(1e-14, 0.0, 1e-12, Relation::Close).pass);
    let c = case(1e-14, 0.0, 1e-12, Relation::Close);
    assert_eq!(c.rel_err, f64::INFINITY);
}

#[test]
fn close_abs_ignores_scale() {
    assert!(!case(1e6 + 1.0, 1e6, 1e-3, Relation::CloseAbs).pass);
    assert!(case(2e-4, 1e-4, 1e-3, Relation::CloseAbs).pass);
}

#[test]
fn at_most_records_signed_margin() {
    let c = case(1.0, 3.0, 0.0, Relation::AtMost);
    assert!(c.pass);
    assert_eq!(c.abs_err, 2.0);
    let c = case(3.0, 3.0 - 1e-7, 1e-6, Relation::AtMost);
    assert!(c.pass && c.abs_err < 0.0);
    assert!(!case(3.0, 2.0, 1e-6, Relation::AtMost).pass);
}

#[test]
fn below_is_strict() {
    assert!(case(-1e-300, 0.0, 0.0, Relation::Below).pass);
    assert!(!case(0.0, 0.0, 0.0, Relation::Below).pass);
}

#[test]
fn nan_never_passes() {
    assert!(!case(f64::NAN, 1.0, 1.0, Relation::Close).pass);
    assert!(!case(f64::NAN, 1.0, 1.0, Relation::AtMost).pass);
    assert!(!case(1.0, f64::INFINITY, 1.0, Relation::Below).pass);
}

#[test]
fn failed_cases_flag_budget() {
    let c = Case::failed("t", "c", 0.5, 1, 1e-6, Relation::Close, &Error::BudgetExceeded(10));
    assert!(!c.pass && c.budget_exceeded);
    let c = Case::failed("t", "c", 0.5, 1, 1e-6, Relation::Close, &Error::Invalid("x".into()));
    assert!(!c.budget_exceeded);
}

fn report(cases: Vec<Case>) -> SuiteReport {
    SuiteReport { suite: "t".into(), cases, wall_time: Duration::ZERO }
}

#[test]
fn exit_status_precedence() {
    let ok = report(vec![case(1.0, 1.0, 0.0, Relation::Close)]);
    let bad = report(vec![case(2.0, 1.0, 0.0, Relation::Close)]);
    let budget = report(vec![Case::failed("t", "c", 0.5, 1, 0.0, Relation::Close, &Error::BudgetExceeded(1))]);
    assert_eq!(exit_status(std::slice::from_ref(&ok)), 0);
    assert_eq!(exit_status(&[ok.clone(), bad.clone()]), 1);
    assert_eq!(exit_status(&[bad, budget, ok]), 3);
    assert_eq!(exit_status(&[]), 0);
}

#[test]
fn csv_layout() {
    let csv = to_csv(&[report(vec![case(0.1, 0.25, 1e-6, Relation::Close)])]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), CSV_HEADER.split(',').count());
    assert_eq!(&row[..4], &["t", "c", "0.5", "1"]);
    assert_eq!(row[4].parse::<f64>().unwrap(), 0.1);
    assert_eq!(row[5].parse::<f64>().unwrap(), 0.25);
    assert_eq!(row[8], "1e-6");
    assert_eq!(row[9], "false");
    assert!(lines.next().is_none());
}

#[test]
fn csv_floats_round_trip() {
    let x = 0.1 + 0.2;
    let csv = to_csv(&[report(vec![case(x, x, 0.0, Relation::Close)])]);
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[4].parse::<f64>().unwrap().to_bits(), x.to_bits());
    assert_eq!(row[9], "true");
}

#[test]
fn suite_ids_round_trip() {
    for id in SuiteId::ALL {
        assert_eq!(id.name().parse::<SuiteId>().unwrap(), id);
        assert_eq!(id.to_string(), id.name());
    }
    assert!("all".parse::<SuiteId>().is_err());
    assert!("Hardy".parse::<SuiteId>().is_err());
}

#[test]
fn config_parsing() {
    let cfg = SuiteConfig::from_json(r#"{"alphas": [0.3], "quad": {"rel_tol": 1e-7, "abs_tol": 1e-14}}"#).unwrap();
    assert_eq!(cfg.alphas, Some(vec![0.3]));
    assert_eq!(cfg.quad.unwrap().rel_tol, 1e-7);
    assert_eq!(SuiteConfig::from_json("{}").unwrap(), SuiteConfig::default());
    for bad in [
        r#"{"alpha": [0.3]}"#,
        r#"{"alphas": []}"#,
        r#"{"alphas": [1.0]}"#,
        r#"{"quad": {"rel_tol": -1}}"#,
        "[",
    ] {
        assert!(SuiteConfig::from_json(bad).is_err(), "{bad}");
    }
}

#[test]
fn hardy_suite_passes_and_is_deterministic() {
    let cfg = SuiteConfig { alphas: Some(vec![0.3, 0.7]), quad: None };
    let a = run(SuiteId::Hardy, &cfg);
    let b = run(SuiteId::Hardy, &cfg);
    assert!(a.passed(), "{:?}", a.failures().collect::<Vec<_>>());
    assert_eq!(to_csv(&[a]), to_csv(&[b]));
}

#[test]
fn cheap_suites_pass_at_one_order() {
    let cfg = SuiteConfig { alphas: Some(vec![0.4]), quad: None };
    for id in [SuiteId::Halfspace, SuiteId::Rigidity, SuiteId::Leibniz] {
        let r = run(id, &cfg);
        assert!(!r.cases.is_empty());
        assert!(r.passed(), "{id}: {:?}", r.failures().collect::<Vec<_>>());
        assert!(r.cases.iter().all(|c| c.suite == id.name() && c.alpha == 0.4));
    }
}
