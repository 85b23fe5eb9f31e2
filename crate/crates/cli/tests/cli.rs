use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pinwheel")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn level_zero_supertile_is_one_triangle() {
    let v = json(&run(&["supertile", "--level", "0"]));
    let tiles = v["tiles"].as_array().unwrap();
    assert_eq!(tiles.len(), 1);
    assert_eq!(tiles[0]["prototile"], "triangle");
}

#[test]
fn supertile_written_to_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let out = run(&["supertile", "--level", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let saved: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(saved, json(&run(&["supertile", "--level", "2"])));
    assert_eq!(saved["tiles"].as_array().unwrap().len(), 25);
}

#[test]
fn kite_supertile_fuses_completely() {
    let v = json(&run(&["fuse", "--proto", "kite", "--level", "2"]));
    assert_eq!(v["unpaired"].as_array().map(Vec::len), Some(0));
}

#[test]
fn level_two_fractile_counts() {
    let v = json(&run(&["fractiles", "--level", "2", "--chirality", "on"]));
    assert_eq!(v["faces"], 24);
    assert_eq!(v["achiral"], 8);
    assert_eq!(v["chiral"], 12);
}

#[test]
fn svg_output_is_svg() {
    let out = run(&["aorta", "--depth", "3", "--format", "svg"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("<svg"));
}

#[test]
fn orientation_census_grows() {
    let v = json(&run(&["orientations", "--level", "4"]));
    assert_eq!(v["distinct"], 4);
    assert_eq!(v["stray"], 0);
}

#[test]
fn unknown_flag_exits_two() {
    assert_eq!(run(&["supertile", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["supertile", "--proto", "hexagon"]).status.code(), Some(2));
}

#[test]
fn out_of_range_request_exits_one() {
    let out = run(&["dangle", "--level", "9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn spectral_on_thirteen_prototiles() {
    let v = json(&run(&["spectral", "--prototiles", "13"]));
    let lambda = v["perron"].as_f64().unwrap();
    assert!((lambda - 5.0).abs() < 1e-9);
}
