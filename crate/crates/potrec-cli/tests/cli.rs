//! End-to-end tests of the command-line interface: exit codes, CSV shape,
//! byte determinism, and the figure-sweep reproduction.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_potrec"))
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("potrec-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        TempDir(dir)
    }
    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
    fn write(&self, name: &str, content: &str) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, content).unwrap();
        p
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "command failed: {:?}\nstderr: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn exit_code(args: &[&str]) -> i32 {
    bin().args(args).output().unwrap().status.code().unwrap()
}

fn config_arg(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

#[test]
fn gauss_known_rules_and_validation() {
    let tmp = TempDir::new("gauss");
    let cfg = tmp.write("hermite.json", r#"{"family": {"kind": "hermite"}, "n": 1}"#);
    let text = run_ok(&["gauss", "--config", &config_arg(&cfg)]);
    let mut lines = text.lines().skip_while(|l| l.starts_with('#'));
    assert_eq!(lines.next().unwrap(), "node,weight,deriv_weight");
    let row = lines.next().unwrap();
    let cells: Vec<&str> = row.split(',').collect();
    assert_eq!(cells[0], "0");
    assert_eq!(cells[1], "1");
    let wd: f64 = cells[2].parse().unwrap();
    assert!((wd - std::f64::consts::PI.sqrt()).abs() < 1e-13);

    let cfg = tmp.write(
        "laguerre.json",
        r#"{"family": {"kind": "laguerre", "nu": 3.0}, "n": 1}"#,
    );
    let text = run_ok(&["gauss", "--config", &config_arg(&cfg)]);
    assert!(text.lines().any(|l| l.starts_with("4,1,")));

    // Invalid n -> config error.
    let bad = tmp.write("bad.json", r#"{"family": {"kind": "hermite"}, "n": 0}"#);
    assert_eq!(exit_code(&["gauss", "--config", &config_arg(&bad)]), 2);
    // Missing config -> config error.
    assert_eq!(exit_code(&["gauss"]), 2);
    // Unknown flag -> config error.
    assert_eq!(exit_code(&["gauss", "--wat"]), 2);
}

#[test]
fn system_reports_and_exit_codes() {
    let tmp = TempDir::new("system");
    let cfg = tmp.write(
        "coulomb.json",
        r#"{"system": {"kind": "coulomb", "z": 2.0, "l": 1.0, "lambda": 3.0}, "n": 4}"#,
    );
    let text = run_ok(&["system", "--config", &config_arg(&cfg)]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["potential_full"]["rows"][0][0], -6.0);
    assert_eq!(v["potential_full"]["rows"][0][1], 0.0);
    // Wave operator is tridiagonal at every sampled energy.
    for entry in v["tridiagonality"].as_array().unwrap() {
        assert_eq!(entry["max_off_band"], 0.0);
    }

    let cfg = tmp.write(
        "morse.json",
        r#"{"system": {"kind": "morse", "alpha": 3.0, "beta": 5.0, "v0": 0.125, "lambda": 1.0}, "n": 4}"#,
    );
    let text = run_ok(&["system", "--config", &config_arg(&cfg)]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let v00 = v["potential_tilde"]["rows"][0][0].as_f64().unwrap();
    assert!((v00 + 10.0).abs() < 1e-10);

    // Hyperbolic pulse with E > 0 violates the assembly precondition.
    let bad = tmp.write(
        "pulse.json",
        r#"{"system": {"kind": "hyperbolic_pulse", "v0": 0.5, "v1": 1.5, "lambda": 1.0, "energy": 1.0}, "n": 8}"#,
    );
    assert_eq!(exit_code(&["system", "--config", &config_arg(&bad)]), 2);
}

#[test]
fn reconstruct_coulomb_csv_and_sidecar() {
    let tmp = TempDir::new("recon");
    let cfg = tmp.write(
        "coulomb.json",
        r#"{"source": {"kind": "system", "system": {"kind": "coulomb", "z": 2.0, "l": 1.0, "lambda": 3.0}}, "sizes": [12]}"#,
    );
    let out = tmp.path("coulomb.csv");
    run_ok(&[
        "reconstruct",
        "--config",
        &config_arg(&cfg),
        "--out",
        &out.to_string_lossy(),
    ]);
    let text = std::fs::read_to_string(&out).unwrap();
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(
        header,
        "x,exact,m1,m1_mask,m2,m2_mask,m3,m3_mask,m4,m4_mask"
    );
    // Reconstruction columns follow the exact curve where unmasked.
    let mut checked = 0;
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let exact: f64 = cells[1].parse().unwrap();
        if cells[2].is_empty() {
            continue;
        }
        let m1: f64 = cells[2].parse().unwrap();
        assert!((m1 - exact).abs() < 1e-7 * exact.abs());
        checked += 1;
    }
    assert!(checked > 300);
    // Every emitted number round-trips through parsing.
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        for cell in line.split(',').filter(|c| !c.is_empty()) {
            let v: f64 = cell.parse().unwrap();
            assert_eq!(format!("{v}"), cell, "cell {cell} not shortest form");
        }
    }
    let diag: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path("coulomb.csv.diag.json")).unwrap())
            .unwrap();
    assert_eq!(diag["runs"][0]["n"], 12);
    assert_eq!(diag["runs"][0]["m4_quadrature_consistent"], true);
}

#[test]
fn reconstruct_is_byte_deterministic() {
    let tmp = TempDir::new("deterministic");
    let cfg = tmp.write(
        "fig1.json",
        r#"{
  "source": {
    "kind": "potential",
    "basis": {"kind": "laguerre_radial", "l": 1.0, "lambda": 7.0},
    "potential": {"kind": "poly_exp", "c": 5.0, "p": 2.0, "k": 1.0}
  },
  "sizes": [20],
  "methods": ["m3", "m4"]
}"#,
    );
    let a = tmp.path("a.csv");
    let b = tmp.path("b.csv");
    run_ok(&[
        "reconstruct",
        "--config",
        &config_arg(&cfg),
        "--out",
        &a.to_string_lossy(),
    ]);
    run_ok(&[
        "reconstruct",
        "--config",
        &config_arg(&cfg),
        "--out",
        &b.to_string_lossy(),
    ]);
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b);
    assert_eq!(
        std::fs::read(tmp.path("a.csv.diag.json")).unwrap(),
        std::fs::read(tmp.path("b.csv.diag.json")).unwrap()
    );
}

#[test]
fn reconstruct_multi_size_writes_one_file_per_size() {
    let tmp = TempDir::new("multi");
    let cfg = tmp.write(
        "fig4.json",
        r#"{"source": {"kind": "system", "system": {"kind": "coulomb", "z": 2.0, "l": 1.0, "lambda": 3.0}}, "methods": ["m3"]}"#,
    );
    let out = tmp.path("fig4.csv");
    run_ok(&[
        "reconstruct",
        "--config",
        &config_arg(&cfg),
        "--sizes",
        "10,20,50",
        "--out",
        &out.to_string_lossy(),
    ]);
    for n in [10, 20, 50] {
        assert!(tmp.path(&format!("fig4_n{n}.csv")).exists());
    }
    // Multiple sizes to stdout is a config error.
    assert_eq!(
        exit_code(&[
            "reconstruct",
            "--config",
            &config_arg(&cfg),
            "--sizes",
            "10,20"
        ]),
        2
    );
}

#[test]
fn exact_curve_sweep_is_deterministic_and_monotone() {
    let tmp = TempDir::new("sweep");
    let cfg = tmp.write(
        "fig6.json",
        r#"{
  "source": {"kind": "system", "system": {"kind": "sin_box", "v0": 0.0, "v1": 0.0, "v2": 1.0, "lambda": 1.0}},
  "exact_only": true,
  "sweep": {"parameter": "v1", "values": [0.0, 1.0, 2.0, 3.0, 4.0, 5.0]}
}"#,
    );
    let a = tmp.path("a.csv");
    let b = tmp.path("b.csv");
    run_ok(&[
        "reconstruct",
        "--config",
        &config_arg(&cfg),
        "--out",
        &a.to_string_lossy(),
    ]);
    run_ok(&[
        "reconstruct",
        "--config",
        &config_arg(&cfg),
        "--out",
        &b.to_string_lossy(),
    ]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let text = std::fs::read_to_string(&a).unwrap();
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "x,v1=0,v1=1,v1=2,v1=3,v1=4,v1=5");
    // Wall growth: at x closest to −π/4, the curve value strictly decreases
    // as v1 increases.
    let target = -std::f64::consts::FRAC_PI_4;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let dist = (cells[0] - target).abs();
        if best.as_ref().map_or(true, |(d, _)| dist < *d) {
            best = Some((dist, cells));
        }
    }
    let (_, row) = best.unwrap();
    for w in row[1..].windows(2) {
        assert!(w[1] < w[0], "wall not deepening: {row:?}");
    }

    // Pulse sweep (the other closed-form family) also renders.
    let cfg = tmp.write(
        "fig7.json",
        r#"{
  "source": {"kind": "system", "system": {"kind": "hyperbolic_pulse", "v0": 0.0, "v1": 1.5, "lambda": 1.0, "energy": -1.0}},
  "exact_only": true,
  "sweep": {"parameter": "v0", "values": [-1.0, -0.5, 0.0, 0.5, 1.0]}
}"#,
    );
    let text = run_ok(&["reconstruct", "--config", &config_arg(&cfg)]);
    assert!(text.lines().any(|l| l == "x,v0=-1,v0=-0.5,v0=0,v0=0.5,v0=1"));
}

#[test]
fn reconstruct_from_matrix_source() {
    let tmp = TempDir::new("matrix");
    // Identity×c in the Morse basis: every method returns the constant.
    let cfg = tmp.write(
        "const.json",
        r#"{
  "source": {
    "kind": "matrix",
    "basis": {"kind": "morse_laguerre", "alpha": 3.0, "lambda": 1.0},
    "entries": [[2.5, 0.0, 0.0], [0.0, 2.5, 0.0], [0.0, 0.0, 2.5]]
  },
  "sizes": [3],
  "methods": ["m1", "m2"],
  "grid": {"min": -1.0, "max": 1.0, "count": 21}
}"#,
    );
    let text = run_ok(&["reconstruct", "--config", &config_arg(&cfg)]);
    let mut seen = 0;
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        // x,exact(empty),m1,m1_mask,m2,m2_mask
        if !cells[2].is_empty() {
            let v: f64 = cells[2].parse().unwrap();
            assert!((v - 2.5).abs() < 1e-9);
            seen += 1;
        }
    }
    assert!(seen > 10);
}

#[test]
fn reconstruct_exit_3_when_all_methods_fail() {
    let tmp = TempDir::new("allfail");
    // The single-column method on a grid where the reference basis function
    // vanishes identically: every point is masked, the method fails, and no
    // other method is selected.
    let cfg = tmp.write(
        "fail.json",
        r#"{
  "source": {
    "kind": "matrix",
    "basis": {"kind": "morse_laguerre", "alpha": 3.0, "lambda": 1.0},
    "entries": [[1.0, 0.0], [0.0, 1.0]]
  },
  "sizes": [2],
  "methods": ["m2"],
  "grid": {"min": 20.0, "max": 30.0, "count": 11}
}"#,
    );
    assert_eq!(exit_code(&["reconstruct", "--config", &config_arg(&cfg)]), 3);
}

#[test]
fn half_line_system_reports_scaled_columns() {
    let tmp = TempDir::new("cdh");
    let cfg = tmp.write(
        "cdh.json",
        r#"{
  "source": {"kind": "system", "system": {"kind": "cdh_system", "v2": 1.0, "gamma": -10.0, "mu": 3.0, "lambda": 1.0}},
  "sizes": [18],
  "methods": ["m2"],
  "grid": {"min": 0.0, "max": 4.0, "count": 50}
}"#,
    );
    let text = run_ok(&["reconstruct", "--config", &config_arg(&cfg)]);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "x,exact,m2,m2_mask,m2_scaled");
    // Scaled column is value / (λ²/2) = 2 × value at λ = 1.
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        if cells[2].is_empty() {
            continue;
        }
        let raw: f64 = cells[2].parse().unwrap();
        let scaled: f64 = cells[4].parse().unwrap();
        assert!((scaled - 2.0 * raw).abs() <= 1e-12 * raw.abs().max(1.0));
    }
}

#[test]
fn verify_subcommand_exit_codes() {
    // A focused suite passes quickly.
    let out = bin()
        .args(["verify", "--suite", "quadrature"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
    assert!(text.lines().all(|l| !l.starts_with("PASS") || l.contains("quadrature")));
    // The default run executes every suite and passes.
    let out = bin().arg("verify").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("acceptance"));
    assert!(text.contains("0 failed"));
    // The perturbation hook forces a tridiagonality failure -> exit 1.
    let code = exit_code(&[
        "verify",
        "--suite",
        "acceptance",
        "--inject-perturbation",
    ]);
    assert_eq!(code, 1);
    // Unknown suite -> config error.
    assert_eq!(exit_code(&["verify", "--suite", "nope"]), 2);
}
