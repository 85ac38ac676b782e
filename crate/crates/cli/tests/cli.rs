//! End-to-end checks of the command-line surface: exit codes, report
//! determinism under a fixed seed, and figure emission.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_billiards"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_temp(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("billiards-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

#[test]
fn validate_square_reports_rationality() {
    let file = write_temp("square.poly", "v 0 0\nv 1 0\nv 1 1\nv 0 1\n");
    let out = run(&["validate", file.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("edges: 4"));
    assert!(text.contains("rational: yes"));
    assert!(text.contains("lcm-denominator: 2"));
}

#[test]
fn validate_bad_file_is_input_error() {
    let file = write_temp("bowtie.poly", "v 0 0\nv 1 1\nv 1 0\nv 0 1\n");
    let out = run(&["validate", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unfold_square_summary() {
    let file = write_temp("square2.poly", "v 0 0\nv 1 0\nv 1 1\nv 0 1\n");
    let out = run(&["unfold", file.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("copies: 4"));
    assert!(text.contains("cone-angles: 2pi,2pi,2pi,2pi"));
    assert!(text.contains("genus: 1"));
}

#[test]
fn unfold_lemma_triangle_summary() {
    // the triangle with angles pi/8, 5pi/8, pi/4 in a polygon file
    let c = {
        let a = std::f64::consts::PI / 8.0;
        let b = 3.0 * std::f64::consts::PI / 8.0;
        let t = b.sin() / (a.cos() * b.sin() - a.sin() * b.cos());
        (t * a.cos(), t * a.sin())
    };
    let file = write_temp(
        "tri8.poly",
        &format!("v 0 0\nv 1 0\nv {:.17} {:.17}\n", c.0, c.1),
    );
    let out = run(&["unfold", file.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("copies: 16"), "{text}");
    assert!(text.contains("genus: 3"), "{text}");
}

#[test]
fn certify_bundled_rooms() {
    for (name, pair) in [("room22.poly", "P1,P2"), ("room26.poly", "P1,P2")] {
        let out = run(&["certify", data(name).to_str().unwrap(), "--pair", pair]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("result: valid"));
    }
}

#[test]
fn certify_tampered_pair_fails_with_exit_1() {
    let out = run(&[
        "certify",
        data("room22.poly").to_str().unwrap(),
        "--pair",
        "0.001:0,4:0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("result: invalid"));
}

#[test]
fn verify_blocking_counterexample_exit_1() {
    let file = write_temp(
        "square3.poly",
        "v 0 0\nv 1 0\nv 1 1\nv 0 1\np C 1/2 1/2\n",
    );
    let out = run(&[
        "verify-blocking",
        file.to_str().unwrap(),
        "--pair",
        "C,C",
        "--samples",
        "2000",
        "--length",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("result: counterexample"));
}

#[test]
fn illuminate_is_deterministic_under_seed() {
    let room = data("room22.poly");
    let args = [
        "illuminate",
        room.to_str().unwrap(),
        "--pair",
        "P1,P2",
        "--samples",
        "500",
        "--length",
        "30",
        "--seed",
        "31",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn shoot_reports_trace() {
    let file = write_temp("square4.poly", "v 0 0\nv 1 0\nv 1 1\nv 0 1\n");
    let out = run(&[
        "shoot",
        file.to_str().unwrap(),
        "--from",
        "0.25:0.5",
        "--dir",
        "1:0",
        "--length",
        "2",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("bounces: 2"));
    assert!(text.contains("end: (0.250000000000, 0.500000000000)"));
}

#[test]
fn render_figures_are_well_formed() {
    let dir = std::env::temp_dir().join("billiards-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();

    let star = dir.join("star.svg");
    let out = run(&["render", "star", "--n", "8", "--m", "5", "--out", star.to_str().unwrap()]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&star).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("stroke-dasharray"));

    let tiling = dir.join("tiling.svg");
    let out = run(&[
        "render",
        "tiling",
        data("room22.cells").to_str().unwrap(),
        "--out",
        tiling.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&tiling).unwrap();
    assert!(svg.contains("</svg>"));
}

#[test]
fn verify_blocking_torus_instance_consistent() {
    // the square pair with the midpoint-construction blocking set
    let file = write_temp(
        "square5.poly",
        "v 0 0\nv 1 0\nv 1 1\nv 0 1\np A 1/4 1/4\np B 3/4 3/4\n",
    );
    let out = run(&[
        "verify-blocking",
        file.to_str().unwrap(),
        "--pair",
        "A,B",
        "--block",
        "0.25:0.5;0.25:0.75;0.5:0.25;0.5:0.5;0.5:0.75;0.75:0.25;0.75:0.5",
        "--samples",
        "4000",
        "--length",
        "20",
        "--invariance",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("result: consistent"), "{text}");
    assert!(text.contains("invariance: 16 pairs checked, 0 violations"), "{text}");
    assert!(text.contains("lifted-cardinality: 28 (bound 28)"), "{text}");
}

#[test]
fn no_return_exact_small() {
    let out = run(&["no-return", "--triangle", "244", "--length", "30"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("violations: 0"));
    assert!(text.contains("result: verified"));
}

#[test]
fn search_small_budget_lists_outcomes() {
    let out = run(&["search", "--grid", "4", "--max-cells", "10", "--states", "30000"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("outcomes:"));
}
