use std::process::{Command, Output};

use qes_core::asymptotics::Potential;
use qes_core::decatic::verify;
use qes_core::numerics::{parse_rational, ExtendedScalar, Number, UniPoly, Var};
use serde_json::Value;

fn qes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qes"))
        .args(args)
        .env_remove("QES_PRECISION")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    stdout(out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn ext(v: &Value) -> ExtendedScalar {
    ExtendedScalar::parse(v.as_str().expect("string")).expect("parses")
}

#[test]
fn exact_ground_state() {
    let out = qes(&["exact", "--a", "1", "--b", "-1", "--c", "1", "--parity", "even", "--n", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let s = &v[0];
    assert_eq!(s["E"], "3/8");
    assert_eq!(s["d"], "-43/8");
    assert_eq!(s["e"], "105/64");
    assert_eq!(s["exact"], true);
}

#[test]
fn exact_output_reverifies() {
    let out = qes(&["exact", "--a", "1", "--b", "-1", "--c", "1", "--parity", "odd", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    for s in json(&out).as_array().expect("list") {
        let p: Vec<ExtendedScalar> = s["potential"].as_array().unwrap().iter().map(ext).collect();
        let a = parse_rational(s["potential"][0].as_str().unwrap()).unwrap();
        let v = Potential::new(a, p[1].clone(), p[2].clone(), p[3].clone(), p[4].clone()).unwrap();
        let chi: Vec<Number> = s["chi_coefficients"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| Number::Exact(ext(c)))
            .collect();
        let report = verify(&v, &Number::Exact(ext(&s["E"])), &UniPoly::new(Var::X, chi));
        assert!(report.exact_zero, "{s}");
    }
}

#[test]
fn exact_degree_two_is_numeric() {
    let out = qes(&[
        "exact", "--a", "1", "--b", "1", "--c", "1", "--parity", "even", "--n", "2", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][2], "false");
    assert!(rows[0][3].starts_with("4.10101030639651414"), "{:?}", rows[0]);
    assert_eq!(rows[0][4], "-69/8");
}

#[test]
fn exact_free_quartic_case_has_a_solution() {
    let out = qes(&["exact", "--a", "1", "--b", "0", "--c", "0", "--parity", "even", "--n", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let s = &json(&out)[0];
    assert_eq!(s["E"], "0");
    assert_eq!(s["d"], "-5");
}

#[test]
fn parse_failures_exit_one() {
    for args in [
        vec!["exact", "--a", "x", "--b", "0", "--c", "0", "--parity", "even", "--n", "0"],
        vec!["exact", "--a", "-1", "--b", "0", "--c", "0", "--parity", "even", "--n", "0"],
        vec!["exact", "--a", "1", "--b", "0", "--c", "0", "--parity", "odd", "--n", "0"],
        vec!["exact", "--a", "1"],
        vec!["table", "--which", "3"],
    ] {
        assert_eq!(qes(&args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(qes(&["--help"]).status.code(), Some(0));
}

#[test]
fn aim_recovers_qes_ground_state() {
    let out = qes(&[
        "aim", "--a", "1", "--b", "-1", "--c", "1", "--d", "-43/8", "--e", "105/64", "--count", "1",
        "--digits", "12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["eigenvalues"][0]["value"], "0.375");
    assert_eq!(v["certificates"][0]["terminated"], true);
    assert_eq!(v["x0"], "0");
}

#[test]
fn aim_qes_block() {
    let out = qes(&[
        "aim", "--a", "0.01", "--b", "0.1", "--c", "1.0", "--d", "3.250", "--e", "12.5625",
        "--count", "2", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows[0][1], "3.75");
    assert_eq!(rows[0][5], "true");
    assert!(rows[1][1].starts_with("11.65304868"), "{:?}", rows[1]);
    assert_eq!(rows[1][5], "false");
}

#[test]
fn aim_without_convergence_exits_three() {
    let out = qes(&[
        "aim", "--a", "0.04", "--b", "0.877", "--c", "5.5", "--d", "-7.5", "--e", "2", "--count",
        "2", "--iters", "12",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(json(&out)["eigenvalues"].is_array());
}

#[test]
fn table_one() {
    let out = qes(&["table", "--which", "1", "--mu", "1", "--k", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.last().unwrap() == "true"));
    assert_eq!(rows[0][6], "3/8");
}

#[test]
fn table_two_first_row() {
    let out = qes(&["table", "--which", "2", "--mu", "4", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v[0]["E"], "9/4");
    assert_eq!(v.as_array().unwrap().len(), 8);
}

#[test]
fn table_five_desk_scale() {
    let out = qes(&["table", "--which", "5", "--count", "1", "--iters", "60", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 4);
    let qes_row = &rows[2];
    assert_eq!(qes_row[2], "3.75");
    assert_eq!(qes_row[4], "true");
}

#[test]
fn conditions_trivial_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ode.json");
    std::fs::write(
        &path,
        r#"{"a6":["1","0","2","0","0","0","0"],"a5":["0","1","0","0","0","0"],"tau4":["0","0","0","0","0"]}"#,
    )
    .unwrap();
    let out = qes(&["conditions", "--file", path.to_str().unwrap(), "--nmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["solutions"][0]["degree"], 0);
    assert_eq!(v["solutions"][0]["coefficients"][0], "1");
}

#[test]
fn conditions_planted_degree_one() {
    // y = 1 + 2x with a6 = x^0, a5 = 2x^5 + x^4 + 2x + 1.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ode.json");
    std::fs::write(
        &path,
        r#"{"a6":["0","0","0","0","0","0","1"],"a5":["2","1","0","0","2","1"],"tau4":["2","0","0","0","2"]}"#,
    )
    .unwrap();
    let out = qes(&["conditions", "--file", path.to_str().unwrap(), "--nmax", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["determinants"][0]["degree"], 1);
    assert_eq!(v["determinants"][0]["all_zero"], true);
    let sols = v["solutions"].as_array().unwrap();
    assert!(sols.iter().any(|s| s["degree"] == 1 && s["coefficients"] == serde_json::json!(["1", "2"])));
}

#[test]
fn conditions_infeasible_and_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ode.json");
    std::fs::write(
        &path,
        r#"{"a6":["1","0","2","0","0","0","0"],"a5":["0","1","0","0","0","0"],"tau4":["1","3","0","0","7"]}"#,
    )
    .unwrap();
    let out = qes(&["conditions", "--file", path.to_str().unwrap(), "--nmax", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no admissible degree ≤ 4"));
    std::fs::write(&path, r#"{"a6":["1"]}"#).unwrap();
    let out = qes(&["conditions", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let out = qes(&["conditions", "--file", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn plot_data_ground_state() {
    let out = qes(&[
        "plot-data", "--a", "1", "--b", "-1", "--c", "1", "--d", "-43/8", "--e", "105/64",
        "--state", "0", "--samples", "400", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 400);
    for r in &rows {
        let x: f64 = r[0].parse().unwrap();
        let psi: f64 = r[2].parse().unwrap();
        let want = (-3.0 * x * x / 16.0 + x.powi(4) / 8.0 - x.powi(6) / 6.0).exp();
        assert!((psi - want).abs() <= 1e-12 * want.max(1e-300), "x={x}: {psi} vs {want}");
    }
    assert_eq!(rows[0][0], "-2");
    assert_eq!(rows[399][0], "2");
}

#[test]
fn plot_data_double_well() {
    let out = qes(&[
        "plot-data", "--a", "0.04", "--b", "0.877", "--c", "5.5", "--d", "-7.5", "--e", "-2",
        "--xmin", "-1.5", "--xmax", "1.5", "--samples", "301", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    let v: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(rows.iter().all(|r| r[2].is_empty()));
    assert_eq!(v[150], 0.0);
    let minima = (1..v.len() - 1).filter(|&i| v[i] < v[i - 1] && v[i] < v[i + 1]).count();
    assert_eq!(minima, 2);
}

#[test]
fn plot_data_single_sample() {
    let out = qes(&[
        "plot-data", "--a", "0.04", "--b", "0.877", "--c", "5.5", "--d", "-7.5", "--e", "2",
        "--xmin", "0", "--xmax", "0", "--samples", "1", "--format", "csv",
    ]);
    assert_eq!(stdout(&out), "x,V,psi\r\n0,0,\r\n");
}

#[test]
fn plot_data_unsolvable_state_exits_two() {
    let out = qes(&[
        "plot-data", "--a", "1", "--b", "-1", "--c", "1", "--d", "-43/8", "--e", "1", "--state",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_is_deterministic_and_out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let args = ["table", "--which", "1", "--mu", "2", "--k", "3", "--format", "csv"];
    let first = stdout(&qes(&args));
    let mut with_out: Vec<&str> = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let out = qes(&with_out);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);
    assert_eq!(stdout(&qes(&args)), first);
}

#[test]
fn precision_env_var_sets_digits() {
    let out = Command::new(env!("CARGO_BIN_EXE_qes"))
        .args(["exact", "--a", "1", "--b", "1", "--c", "1", "--parity", "even", "--n", "2"])
        .env("QES_PRECISION", "15")
        .output()
        .unwrap();
    let e = json(&out)[0]["E"].as_str().unwrap().to_string();
    assert_eq!(e.trim_start_matches('-').replace('.', "").len(), 15, "{e}");
}
