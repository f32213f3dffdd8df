use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn ofnts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ofnts"))
        .args(args)
        .output()
        .expect("spawn ofnts")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn records(out: &Output) -> Vec<serde_json::Value> {
    serde_json::from_str(&stdout(out)).unwrap()
}

#[test]
fn report_table_for_december_window() {
    let out = ofnts(&[
        "report",
        "-i",
        &fixture("tsla_2019-12.csv"),
        "--label",
        "TSLA",
        "--size",
        "20",
    ]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("Label"));
    let row: Vec<&str> = lines.next().unwrap().split_whitespace().collect();
    assert_eq!(
        row,
        ["TSLA", "347.36", "418.56", "379.84", "398.78", "36.68", "336.20", "418.33", "0.61", "26.13", "0.42"]
    );
}

#[test]
fn extended_precision_prints_seven_decimals() {
    let out = ofnts(&[
        "report",
        "-i",
        &fixture("tsla_2020-03.csv"),
        "--size",
        "20",
        "--extended-precision",
    ]);
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    assert!(row.split_whitespace().any(|c| c == "104.4209107"), "{row}");
}

#[test]
fn csv_report_has_header_and_row() {
    let out = ofnts(&["report", "--format", "csv", "-i", &fixture("ramp.csv"), "--size", "5"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("ramp,1.50,4.50,3.00,3.67,"));
}

#[test]
fn mb_build_on_ramp() {
    let out = ofnts(&["build", "-i", &fixture("ramp.csv"), "--size", "5", "--method", "mb"]);
    let recs = records(&out);
    let intercept = recs[0]["up_branch"]["intercept"].as_f64().unwrap();
    assert!((intercept - (1.0 - 2.5_f64.sqrt())).abs() < 1e-12);
    assert_eq!(recs[0]["scheme"], "sa+lwa");
}

#[test]
fn constant_series_has_unit_skew() {
    let out = ofnts(&["stats", "-i", &fixture("constant.csv"), "--size", "4"]);
    let recs = records(&out);
    assert_eq!(recs[0]["skew"], 1.0);
    assert_eq!(recs[0]["imprecision"], 0.0);
    assert_eq!(recs[0]["direction_strength"], 1.0);
}

#[test]
fn rolling_windows_and_json_lines() {
    let out = ofnts(&[
        "build",
        "--format",
        "jsonl",
        "-i",
        &fixture("ramp.csv"),
        "--size",
        "3",
        "--stride",
        "1",
    ]);
    let text = stdout(&out);
    let starts: Vec<String> = text
        .lines()
        .map(|l| {
            serde_json::from_str::<serde_json::Value>(l).unwrap()["window_start"]
                .as_str()
                .unwrap()
                .to_owned()
        })
        .collect();
    assert_eq!(starts, ["2021-01-04", "2021-01-05", "2021-01-06"]);
}

#[test]
fn piasecki_on_synthetic_week_is_flagged_improper() {
    let out = ofnts(&[
        "build",
        "-i",
        &fixture("tsla_week_synthetic.csv"),
        "--size",
        "5",
        "--method",
        "piasecki",
    ]);
    let recs = records(&out);
    assert_eq!(recs[0]["proper"], false);
    assert!(recs[0]["skew"].is_null());
}

#[test]
fn piasecki_without_ohlc_is_a_data_error() {
    let out = ofnts(&[
        "build",
        "-i",
        &fixture("tsla_2019-12.csv"),
        "--size",
        "20",
        "--method",
        "piasecki",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn ea_gamma_changes_the_core() {
    let base = records(&ofnts(&[
        "build",
        "-i",
        &fixture("ramp.csv"),
        "--size",
        "5",
        "--scheme",
        "ea",
    ]));
    let tuned = records(&ofnts(&[
        "build",
        "-i",
        &fixture("ramp.csv"),
        "--size",
        "5",
        "--scheme",
        "ea",
        "--gamma",
        "0.9",
    ]));
    assert_ne!(base[0]["a1_plus"], tuned[0]["a1_plus"]);
    assert_eq!(tuned[0]["scheme"], "ea(gamma=0.9)");
}

#[test]
fn plot_writes_svg() {
    let out = ofnts(&["plot", "-i", &fixture("tsla_2020-03.csv"), "--size", "20"]);
    let svg = stdout(&out);
    assert!(svg.starts_with("<?xml") && svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains("694.28 − 130.57α"), "{svg}");
}

#[test]
fn plot_with_several_records_needs_a_directory() {
    let out = ofnts(&["plot", "-i", &fixture("ramp.csv"), "--size", "3"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let out = ofnts(&[
        "plot",
        "-i",
        &fixture("ramp.csv"),
        "--size",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    stdout(&out);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 3);
}

#[test]
fn usage_errors_exit_with_two() {
    let cases: [&[&str]; 5] = [
        &["report", "-i", "x.csv"],
        &["report", "-i", "x.csv", "--size", "1"],
        &["report", "-i", "x.csv", "--window", "2020-03-01"],
        &["report", "-i", "x.csv", "--size", "3", "--gamma", "0.5"],
        &["report", "-i", "x.csv", "--size", "3", "--method", "magic"],
    ];
    for args in cases {
        assert_eq!(ofnts(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn data_errors_exit_with_three() {
    let out = ofnts(&["report", "-i", "does-not-exist.csv", "--size", "3"]);
    assert_eq!(out.status.code(), Some(3));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("dup.csv");
    std::fs::write(&bad, "Date,Close\n2020-01-02,1.00\n2020-01-02,2.00\n").unwrap();
    let out = ofnts(&["report", "-i", bad.to_str().unwrap(), "--size", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dup.csv"));

    let out = ofnts(&["report", "-i", &fixture("ramp.csv"), "--size", "9"]);
    assert_eq!(out.status.code(), Some(3));
}
