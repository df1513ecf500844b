use std::path::PathBuf;
use std::process::{Command, Output};

fn lowdisp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lowdisp"))
        .args(args)
        .env_remove("LOWDISP_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lowdisp-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn fixed_points_table() {
    let o = lowdisp(&["fixed-points"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,F,residual,piece"));
    let rows: Vec<Vec<f64>> =
        lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[1][0] - 12.54758).abs() < 1e-5);
    assert_eq!(rows[1][3], 17.0);
    assert!(rows.iter().all(|r| r[2].abs() <= 1e-9));
}

#[test]
fn limit_is_zero_before_first_breakpoint() {
    let o = lowdisp(&["limit", "--s", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "s,F\n0.5,0\n");
}

#[test]
fn pcf_with_limit_columns() {
    let o = lowdisp(&["pcf", "--n", "2000", "--s-range", "1:3:1", "--with-limit"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("s,F_N,F\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn gaps_suite_passes() {
    let o = lowdisp(&["verify", "--suite", "gaps"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gaps: PASS"));
    assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["pcf", "--alpha", "1.5"][..],
        &["pcf", "--s", "1", "--s-range", "0:1:0.5"],
        &["limit", "--s-range", "nonsense"],
        &["generate", "--n", "0"],
        &["no-such-command"],
    ] {
        let o = lowdisp(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn json_output_parses() {
    let o = lowdisp(&["--format", "json", "bounds", "--n", "1000", "--s", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["columns"][0], "s");
    let row = &v["rows"][0];
    assert!(row[1].as_f64().unwrap() < row[2].as_f64().unwrap());
}

#[test]
fn output_is_deterministic() {
    let args = ["weak", "--n", "5000", "--alpha", "0.25,0.5", "--s-range", "0.5:2:0.5"];
    let a = lowdisp(&args);
    let b = lowdisp(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_dir_prefixes_relative_paths() {
    let dir = scratch_dir("outdir");
    let o = Command::new(env!("CARGO_BIN_EXE_lowdisp"))
        .args(["gaps", "--n", "8", "--output", "gaps.csv"])
        .env("LOWDISP_OUTPUT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(dir.join("gaps.csv")).unwrap();
    assert_eq!(written.lines().count(), 9);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn unwritable_output_exits_one() {
    let o = lowdisp(&["limit", "--s", "1", "--output", "/nonexistent-dir/f.csv"]);
    assert_eq!(o.status.code(), Some(1));
}
