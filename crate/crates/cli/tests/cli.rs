use std::path::Path;
use std::process::{Command, Output};

fn epn(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_epn"));
    cmd.args(args);
    match cache {
        Some(dir) => cmd.arg("--cache-dir").arg(dir),
        None => cmd.arg("--no-cache"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = epn(args, None);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn golden_outputs() {
    let cases: [(&[&str], &str); 7] = [
        (&["derive", "2"], include_str!("golden/derive_2.txt")),
        (&["derive", "6"], include_str!("golden/derive_6.txt")),
        (&["derive", "7"], include_str!("golden/derive_7.txt")),
        (&["solve", "4"], include_str!("golden/solve_4.txt")),
        (&["verify", "6", "--tuple", "split-demo", "--trials", "2"], include_str!("golden/verify_split_demo.csv")),
        (
            &["sweep", "4", "--tuple", "bh", "--zmin", "-1", "--zmax", "0.5", "--grid", "4"],
            include_str!("golden/sweep_4_bh.csv"),
        ),
        (&["boundaries", "6", "--tuple", "a"], include_str!("golden/boundaries_6_a.txt")),
    ];
    for (args, want) in cases {
        assert_eq!(stdout(args), want, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| epn(args, None).status.code();
    assert_eq!(code(&["derive", "1"]), Some(2));
    assert_eq!(code(&["verify", "6", "--tuple", "nope"]), Some(2));
    assert_eq!(code(&["solve", "4", "--method", "nope"]), Some(2));
    assert_eq!(code(&["solve", "8", "--method", "groebner", "--max-pairs", "5"]), Some(3));
    let err = String::from_utf8(epn(&["derive", "1"], None).stderr).unwrap();
    assert!(err.starts_with("error: "), "{err}");
}

#[test]
fn csv_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let csv = dir.path().join(name);
        let args = ["verify", "6", "--tuple", "a", "--trials", "2", "--seed", "7", "--csv", csv.to_str().unwrap()];
        let out = epn(&args, None);
        assert!(out.status.success());
        (std::fs::read(&csv).unwrap(), out.stdout)
    };
    assert_eq!(run("one.csv"), run("two.csv"));
    let sweep = ["sweep", "6", "--tuple", "b", "--zmin", "-50", "--zmax", "100", "--grid", "21"];
    assert_eq!(stdout(&sweep), stdout(&sweep));
}

#[test]
fn warm_cache_matches_cold_run() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 3] = [
        &["solve", "6"],
        &["verify", "6", "--tuple", "t1", "--trials", "2"],
        &["boundaries", "6", "--tuple", "b", "--window", "-100..200"],
    ];
    for args in cases {
        let cold = epn(args, Some(dir.path()));
        let warm = epn(args, Some(dir.path()));
        assert!(cold.status.success() && warm.status.success(), "{args:?}");
        assert_eq!(cold.stdout, warm.stdout, "{args:?}");
        assert_eq!(cold.stdout, epn(args, None).stdout, "{args:?}");
    }
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    assert!(entries >= 2, "{entries} cache files");
}

#[test]
fn corrupt_cache_entry_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["solve", "5"];
    let cold = epn(&args, Some(dir.path()));
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        v["hash"] = serde_json::Value::String("0".repeat(64));
        std::fs::write(&path, v.to_string()).unwrap();
    }
    let warm = epn(&args, Some(dir.path()));
    assert!(warm.status.success());
    assert_eq!(cold.stdout, warm.stdout);
}

#[test]
fn derive_out_writes_cache_entry() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n4.json");
    stdout(&["derive", "4", "--out", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    assert!(v["hash"].as_str().is_some_and(|h| h.len() == 64));
}

#[test]
fn sweep_writes_csv_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let svg = dir.path().join("s.svg");
    let args = [
        "sweep", "6", "--tuple", "a", "--zmin", "-500", "--zmax", "900", "--grid", "15", "--csv",
        csv.to_str().unwrap(), "--plot", svg.to_str().unwrap(),
    ];
    assert!(epn(&args, None).status.success());
    let rows = std::fs::read_to_string(&csv).unwrap();
    // grid points plus refinement samples around each boundary
    assert!(rows.lines().count() > 16);
    let plot = std::fs::read_to_string(&svg).unwrap();
    assert!(plot.starts_with("<svg") && plot.contains("polyline"));
}
