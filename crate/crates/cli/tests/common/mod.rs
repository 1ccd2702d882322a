#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cfshape"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn cfshape")
}

pub fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "cfshape {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Data rows of a CSV table (metadata and header stripped), split into cells.
pub fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let meta = lines.next().unwrap();
    assert!(meta.starts_with("# "));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

pub fn num(cell: &str) -> f64 {
    cell.parse()
        .unwrap_or_else(|_| panic!("not a number: `{cell}`"))
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub const FILTER_ONLY: &[&str] = &[
    "spectrum",
    "--element",
    "filter",
    "--kappa-f",
    "1",
    "--delta-f",
    "1",
];
pub const NOTCH_P0: &[&str] = &[
    "spectrum",
    "--topology",
    "notch",
    "--kappa",
    "10",
    "--g",
    "0.1",
    "--kappa-f",
    "1",
];
pub const BANDPASS_P0: &[&str] = &[
    "spectrum",
    "--topology",
    "bandpass",
    "--kappa",
    "10",
    "--g",
    "0.1",
    "--kappa-f",
    "1",
];
pub const NOTCH_OPTIMAL: &[&str] = &[
    "spectrum",
    "--topology",
    "notch",
    "--kappa",
    "10",
    "--g",
    "0.1",
    "--kappa-f",
    "1",
    "--delta",
    "auto",
];

pub const GOLDEN_RUNS: &[(&str, &[&str])] = &[
    ("filter_response.csv", FILTER_ONLY),
    ("notch_p0.csv", NOTCH_P0),
    ("bandpass_p0.csv", BANDPASS_P0),
    ("notch_optimal.csv", NOTCH_OPTIMAL),
];
