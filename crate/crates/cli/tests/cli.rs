use std::process::{Command, Output};

fn fracvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracvar"))
        .args(args)
        .env_remove("FRACVAR_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const GAUSS: &str = r#"{"kind":"gaussian","center":[0],"width":1,"dim":1}"#;

#[test]
fn constants_row_matches_library() {
    let o = fracvar(&["constants", "--n", "2", "--alpha", "0.3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let cells: Vec<&str> = out.trim().split(',').collect();
    assert_eq!(cells.len(), 8);
    assert_eq!(cells[0], "2");
    assert_eq!(cells[1].parse::<f64>().unwrap(), 0.3);
    assert_eq!(cells[2].parse::<f64>().unwrap(), fracvar::constants::mu(2, 0.3).unwrap());
    assert_eq!(cells[3].parse::<f64>().unwrap(), fracvar::constants::nu(2, 0.7).unwrap());
    assert_eq!(cells[7].parse::<f64>().unwrap(), fracvar::constants::ball_volume(2).unwrap());

    let o = fracvar(&["constants", "--n", "1", "--alpha", "0.5", "--header"]);
    assert!(stdout(&o).starts_with("n,alpha,mu,nu(1-alpha),c_half,gamma_spector,c_max,omega_n\n"));
}

#[test]
fn eval_grad_matches_spectral_oracle() {
    let o = fracvar(&["eval", "--op", "grad", "--alpha", "0.5", "--field", GAUSS, "--points", "-0.4,0.7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("x,value,err_estimate,evals"));
    let f = fracvar::fields::ScalarField::from_json(GAUSS).unwrap();
    for line in lines {
        let c: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(c.len(), 4);
        let oracle = fracvar::operators::spectral_gradient_1d(&f, 0.5, c[0]).unwrap();
        assert!((c[1] - oracle).abs() < 1e-7, "{line} vs {oracle}");
        assert!(c[3] > 0.0);
    }
}

#[test]
fn eval_reads_files_and_vector_fields() {
    let dir = tempfile::tempdir().unwrap();
    let field = dir.path().join("phi.json");
    std::fs::write(
        &field,
        r#"{"components":[{"kind":"gaussian","center":[0,0],"width":1},{"kind":"gaussian","center":[0,0],"width":1,"amplitude":0}]}"#,
    )
    .unwrap();
    let pts = dir.path().join("pts.csv");
    std::fs::write(&pts, "x1,x2\n0.5,0\n0,0.5\n").unwrap();
    let o = fracvar(&[
        "eval",
        "--op",
        "div",
        "--alpha",
        "0.5",
        "--field",
        &format!("@{}", field.display()),
        "--points",
        &format!("@{}", pts.display()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "x1,x2,value,err_estimate,evals");
    assert_eq!(rows.len(), 3);
    // div of (g, 0) along the second axis vanishes by symmetry
    let v: f64 = rows[2].split(',').nth(2).unwrap().parse().unwrap();
    assert!(v.abs() < 1e-10, "{v}");
}

#[test]
fn riesz_order_defaults_to_complement() {
    let a = fracvar(&["eval", "--op", "riesz", "--alpha", "0.3", "--field", GAUSS, "--points", "0.2"]);
    let b = fracvar(&["eval", "--op", "riesz", "--order", "0.7", "--field", GAUSS, "--points", "0.2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["eval", "--op", "grad", "--field", GAUSS, "--points", "0"],
        &["eval", "--op", "grad", "--alpha", "0.5", "--field", r#"{"kind":"nope"}"#, "--points", "0"],
        &["eval", "--op", "grad", "--alpha", "0.5", "--field", GAUSS, "--points", "a,b"],
        &["eval", "--op", "nlgrad", "--alpha", "0.5", "--field", GAUSS, "--points", "0"],
        &["eval", "--op", "grad", "--alpha", "1.2", "--field", GAUSS, "--points", "0"],
        &["verify", "--suite", "nope"],
        &["verify", "--suite", "hardy", "--alpha", "1.5"],
        &["verify", "--suite", "hardy", "--config", "/nonexistent/cfg.json"],
        &["oracle", "--name", "weight", "--alpha", "0.5", "--points", "1"],
        &["frobnicate"],
    ];
    for args in cases {
        assert_eq!(fracvar(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn bad_thread_cap_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_fracvar"))
        .args(["constants", "--n", "1", "--alpha", "0.5"])
        .env("FRACVAR_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_fracvar"))
        .args(["constants", "--n", "1", "--alpha", "0.5"])
        .env("FRACVAR_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn exhausted_budget_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"quad": {"rel_tol": 1e-13, "abs_tol": 1e-16, "max_evals": 100}}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = fracvar(&["eval", "--op", "grad", "--alpha", "0.5", "--field", GAUSS, "--points", "0.3", "--config", cfg]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).lines().nth(1).unwrap().contains("NaN"));
    let o = fracvar(&["verify", "--suite", "halfspace", "--alpha", "0.5", "--config", cfg]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_writes_deterministic_reports() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let o = fracvar(&["verify", "--suite", "leibniz", "--alpha", "0.3,0.6", "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
        std::fs::read(path).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("suite,case_id,alpha,n,lhs,rhs,abs_err,rel_err,tol,pass\n"));
    assert!(text.lines().skip(1).all(|l| l.starts_with("leibniz,") && l.ends_with(",true")));
    assert!(text.contains(",0.3,") && text.contains(",0.6,"));
}

#[test]
fn oracles_print_closed_forms() {
    let o = fracvar(&["oracle", "--name", "interval", "--alpha", "0.5"]);
    let out = stdout(&o);
    let row: Vec<f64> = out.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(row[1], 4.0);
    assert!((row[2] - 3.1915382432114594).abs() < 1e-12);

    let o = fracvar(&["oracle", "--name", "gamma-radial", "--alpha", "0.5", "--n", "3"]);
    let out = stdout(&o);
    let row: Vec<f64> = out.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((row[2] - 2.0).abs() < 1e-12 && (row[3] - 2.0).abs() < 1e-10);

    let o = fracvar(&["oracle", "--name", "halfspace", "--alpha", "0.5", "--nu", "3,4", "--points", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("x1,x2,grad1,grad2\n"));

    let o = fracvar(&["oracle", "--name", "f-alpha", "--alpha", "0.5", "--points", "-1,0.5"]);
    assert_eq!(stdout(&o).lines().count(), 3);
    // the jump points of f_alpha are singular
    assert_eq!(fracvar(&["oracle", "--name", "f-alpha", "--alpha", "0.5", "--points", "0"]).status.code(), Some(1));
}
