use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn plrs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plrs"))
        .args(args)
        .env_remove("PLRS_ENUM_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("plrs-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn assert_golden(args: &[&str], name: &str) {
    let output = plrs(args);
    assert_eq!(
        output.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert_eq!(stdout(&output), golden(name), "{args:?}");
}

#[test]
fn golden_outputs() {
    assert_golden(
        &["--coeffs", "1,1", "--format", "json", "decompose", "12"],
        "decompose_1_1_12.json",
    );
    assert_golden(
        &[
            "--coeffs",
            "2,2,0,2",
            "--format",
            "json",
            "decompose",
            "601",
        ],
        "decompose_2_2_0_2_601.json",
    );
    assert_golden(
        &["--coeffs", "2,2,0,2", "--format", "csv", "blocks"],
        "blocks_2_2_0_2.csv",
    );
    assert_golden(
        &["--coeffs", "1,1", "--format", "csv", "poly", "10"],
        "poly_1_1_10.csv",
    );
    assert_golden(
        &["--coeffs", "3,0,1", "--format", "json", "stats", "12"],
        "stats_3_0_1_12.json",
    );
    assert_golden(
        &[
            "--coeffs",
            "2,2,0,2",
            "--format",
            "csv",
            "zdist",
            "11",
            "--empirical",
        ],
        "zdist_2_2_0_2_11.csv",
    );
    assert_golden(
        &[
            "--coeffs",
            "1,2",
            "--format",
            "csv",
            "sample",
            "30",
            "--samples",
            "20",
            "--seed",
            "5",
        ],
        "sample_1_2_30.csv",
    );
    assert_golden(
        &[
            "--coeffs", "1,1", "--format", "csv", "verify", "--n-max", "40",
        ],
        "verify_1_1_40.csv",
    );
    assert_golden(
        &["--coeffs", "1,1", "--format", "csv", "seq", "12"],
        "seq_1_1_12.csv",
    );
    assert_golden(
        &["--coeffs", "1,1", "--format", "json", "enumerate", "5"],
        "enumerate_1_1_5.json",
    );
}

#[test]
fn golden_values_are_right() {
    // F-indices of 12 = 8 + 3 + 1.
    let json: serde_json::Value = serde_json::from_str(&golden("decompose_1_1_12.json")).unwrap();
    assert_eq!(json["indices"], serde_json::json!([5, 3, 1]));
    assert_eq!(json["blocks"], "[1 0][1 0][1]");
    // Fibonacci strings of length 10 with k summands number C(10-k, k-1).
    let poly = golden("poly_1_1_10.csv");
    let counts: Vec<u64> = poly
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(counts, [0, 1, 8, 21, 20, 5]);
    assert_eq!(counts.iter().sum::<u64>(), 144 - 89);
}

#[test]
fn table_output_is_readable() {
    let output = plrs(&["--coeffs", "1,1", "decompose", "12"]);
    let text = stdout(&output);
    assert!(text.contains("F-indices: 5,3,1"), "{text}");
    assert!(text.contains("[1 0][1 0][1]"), "{text}");
    let output = plrs(&["--coeffs", "2,2,0,2", "decompose", "601"]);
    assert!(stdout(&output).contains("H-indices: 7,4,4,1"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        plrs(&["--coeffs", "1,1", "validate", "1 1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        plrs(&["--coeffs", "1,1", "validate", "1 0 1"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        plrs(&["--coeffs", "0,1", "seq", "5"]).status.code(),
        Some(2)
    );
    assert_eq!(plrs(&["--coeffs", "1", "seq", "5"]).status.code(), Some(2));
    assert_eq!(plrs(&["seq", "5"]).status.code(), Some(2));
    assert_eq!(plrs(&["--coeffs", "1,1"]).status.code(), Some(2));
    assert_eq!(
        plrs(&["--coeffs", "1,1", "frobnicate"]).status.code(),
        Some(2)
    );
    assert_eq!(
        plrs(&["--coeffs", "1,1", "decompose", "abc"]).status.code(),
        Some(2)
    );
    assert_eq!(
        plrs(&["--coeffs", "1,1", "--cap", "10", "enumerate", "12"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(plrs(&["--help"]).status.code(), Some(0));
}

#[test]
fn enumeration_cap_comes_from_the_environment() {
    let output = Command::new(env!("CARGO_BIN_EXE_plrs"))
        .args(["--coeffs", "1,1", "enumerate", "12"])
        .env("PLRS_ENUM_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("10"));
}

#[test]
fn verify_passes_on_a_short_window() {
    let output = plrs(&["--coeffs", "2,2,0,2", "verify", "--n-max", "100"]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).contains("all variance bounds hold"));
}

#[test]
fn config_file_and_output_file() {
    let config = scratch("config.json");
    std::fs::write(
        &config,
        r#"{"coefficients": "1,1", "command": "decompose", "m": "12", "format": "json"}"#,
    )
    .unwrap();
    let output = plrs(&["--config", config.to_str().unwrap()]);
    assert_eq!(
        output.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert_eq!(stdout(&output), golden("decompose_1_1_12.json"));

    let listed = scratch("listed.json");
    std::fs::write(
        &listed,
        r#"{"coefficients": [2, 2, 0, 2], "command": "blocks", "format": "csv"}"#,
    )
    .unwrap();
    let output = plrs(&["--config", listed.to_str().unwrap()]);
    assert_eq!(stdout(&output), golden("blocks_2_2_0_2.csv"));

    // Command-line values override the file.
    let output = plrs(&["--config", config.to_str().unwrap(), "--format", "table"]);
    assert!(stdout(&output).contains("F-indices: 5,3,1"));

    let target = scratch("out.csv");
    let output = plrs(&[
        "--coeffs",
        "1,1",
        "--format",
        "csv",
        "--output",
        target.to_str().unwrap(),
        "poly",
        "10",
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert!(output.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&target).unwrap(),
        golden("poly_1_1_10.csv")
    );

    let bad = scratch("bad.json");
    std::fs::write(
        &bad,
        r#"{"coefficients": "1,1", "command": "seq", "n": 5, "colour": "red"}"#,
    )
    .unwrap();
    assert_eq!(
        plrs(&["--config", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        plrs(&["--config", "/nonexistent/plrs.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn sampling_is_reproducible() {
    let args = [
        "--coeffs",
        "3,0,1",
        "--format",
        "json",
        "sample",
        "80",
        "--samples",
        "50",
        "--seed",
        "42",
    ];
    let first = plrs(&args);
    let second = plrs(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let other = plrs(&[
        "--coeffs",
        "3,0,1",
        "--format",
        "json",
        "sample",
        "80",
        "--samples",
        "50",
        "--seed",
        "43",
    ]);
    assert_ne!(first.stdout, other.stdout);
}

#[test]
fn json_outputs_parse() {
    for args in [
        vec!["--coeffs", "1,2", "--format", "json", "blocks"],
        vec![
            "--coeffs",
            "1,2",
            "--format",
            "json",
            "identities",
            "12",
            "--enumerate",
        ],
        vec!["--coeffs", "1,2", "--format", "json", "zdist", "10"],
        vec![
            "--coeffs", "1,1", "--format", "json", "verify", "--n-max", "60",
        ],
        vec![
            "--coeffs", "1,1", "--format", "json", "gauss", "--n-list", "20,40",
        ],
        vec!["--coeffs", "1,1", "--format", "json", "validate", "1 0 1"],
    ] {
        let output = plrs(&args);
        assert_eq!(output.status.code(), Some(0), "{args:?}");
        let json: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
        assert!(json["spec"].as_str().is_some(), "{args:?}");
    }
}
