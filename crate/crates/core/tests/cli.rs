use std::process::{Command, Output};

use shapecount::{ComparisonRow, Mode, PrimeTable};

fn shapecount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shapecount"))
        .args(args)
        .env_remove("SHAPECOUNT_LIMIT")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value_line(text: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix("value "))
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn count_examples() {
    let o = shapecount(&["count", "--shape", "1,3", "--x", "100", "--mode", "pi"]);
    assert_eq!(stdout(&o), "5\n");
    let o = shapecount(&["count", "--shape", "1,3", "--x", "100", "--mode", "sigma"]);
    assert_eq!(stdout(&o), "7\n");
    let o = shapecount(&["count", "--shape", "0,3", "--x", "100", "--mode", "pi"]);
    assert_eq!(o.status.code(), Some(2));
    let o = shapecount(&["count", "--shape", "1,3", "--x", "1e6", "--mode", "pi"]);
    assert_eq!(stdout(&o), "17459\n");
}

#[test]
fn capacity_diagnostic_names_limit() {
    let o = shapecount(&[
        "count", "--shape", "1,1", "--x", "1e6", "--mode", "pi", "--limit", "100",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("500000"), "{err}");
}

#[test]
fn environment_limit_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_shapecount"))
        .args(["count", "--shape", "1", "--x", "1e6", "--mode", "pi"])
        .env("SHAPECOUNT_LIMIT", "1000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_shapecount"))
        .args(["count", "--shape", "1", "--x", "1e6", "--mode", "pi"])
        .env("SHAPECOUNT_LIMIT", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn constant_examples() {
    let o = shapecount(&["constant", "--shape", "1,3", "--mode", "sigma"]);
    let text = stdout(&o);
    assert!((value_line(&text) - 0.174_762_639_2).abs() < 2e-9, "{text}");
    assert!(text.ends_with("method product\n"));
    let o = shapecount(&["constant", "--shape", "1,3", "--mode", "pi"]);
    assert!(stdout(&o).ends_with("method enumeration\n"));
    let o = shapecount(&["constant", "--beta", "2,3,5", "--check-unique"]);
    assert_eq!(stdout(&o), "not unique: {2,3} vs {5}\n");
    let o = shapecount(&["constant", "--shape", "2,2", "--mode", "sigma"]);
    let text = stdout(&o);
    assert_eq!(value_line(&text), 1.0);
    assert!(text.ends_with("method product\n"));
    let o = shapecount(&["constant", "--shape", "1,3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn prime_zeta_examples() {
    let o = shapecount(&["prime-zeta", "--s", "2"]);
    assert!((value_line(&stdout(&o)) - 0.452_247_420_0).abs() < 2e-10);
    let o = shapecount(&["prime-zeta", "--s", "19"]);
    assert!((value_line(&stdout(&o)) / 1.9082e-6 - 1.0).abs() < 1e-4);
    let o = shapecount(&["prime-zeta", "--s", "1"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn compare_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let o = shapecount(&[
        "compare",
        "--shape",
        "1,3",
        "--mode",
        "pi",
        "--x-grid",
        "1e6,1e4",
        "--format",
        "csv",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "x,exact,estimate,semi_exact,ratio,constant,mode,shape"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("10000,312,"));
    assert!(lines[2].starts_with("1000000,17459,"));
    assert!(lines[1].ends_with(",pi,\"1,3\""));

    let json = dir.path().join("r.json");
    let o = shapecount(&[
        "compare",
        "--shape",
        "1,1",
        "--mode",
        "sigma",
        "--x-grid",
        "1e3",
        "--format",
        "json",
        "--out",
        json.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let rows: Vec<ComparisonRow> =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let t = PrimeTable::build(10_000).unwrap();
    let fresh =
        shapecount::report::compare_rows(&"1,1".parse().unwrap(), Mode::Sigma, &[1000], 1e-9, &t)
            .unwrap();
    assert_eq!(rows, fresh);
    assert_eq!(
        rows[0].estimate,
        shapecount::landau_main_term(1000.0, 2).unwrap()
    );
}

#[test]
fn compare_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let out = out.to_str().unwrap();
    for grid in ["1e4,,", "1.5e4", "abc"] {
        let o = shapecount(&[
            "compare", "--shape", "1,3", "--mode", "pi", "--x-grid", grid, "--format", "csv",
            "--out", out,
        ]);
        assert_eq!(o.status.code(), Some(2), "{grid}");
    }
    let o = shapecount(&[
        "compare", "--shape", "1,3", "--mode", "pi", "--x-grid", "50", "--format", "csv", "--out",
        out,
    ]);
    assert_eq!(o.status.code(), Some(2));
}
