use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use skycov_cli::preset;

fn skycov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skycov")).args(args).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const NEAREST: &str = "\
name = quick
mode = static-nearest
sweep.param = theta
sweep.values = -10:5:10
mc.samples = 400
mc.seed = 9
";

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "quick.cfg", NEAREST);
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let a = skycov(&["run", &cfg, "--out", out_a.to_str().unwrap(), "--workers", "1"]);
    assert!(a.status.success(), "{}", stderr(&a));
    let b = skycov(&["run", &cfg, "--out", out_b.to_str().unwrap()]);
    assert!(b.status.success(), "{}", stderr(&b));
    let csv_a = fs::read(out_a.join("quick.csv")).unwrap();
    assert_eq!(csv_a, fs::read(out_b.join("quick.csv")).unwrap());
    let text = String::from_utf8(csv_a).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "theta_db,analytic_ub,analytic_lb,mc_value,mc_stderr,status");
    assert_eq!(lines.len(), 6);
    let xs: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(xs, vec!["-10", "-5", "0", "5", "10"]);
}

#[test]
fn manifest_records_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "quick.cfg", NEAREST);
    let out = dir.path().join("o");
    let r = skycov(&["run", &cfg, "--out", out.to_str().unwrap(), "--seed", "4", "--samples", "300"]);
    assert!(r.status.success(), "{}", stderr(&r));
    let m: serde_json::Value = serde_json::from_slice(&fs::read(out.join("quick.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["seed"], 4);
    assert_eq!(m["mc_samples"], 300);
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(m["config_sha256"].as_str().unwrap().len(), 64);
    assert!(m["total_runtime_ms"].as_f64().unwrap() > 0.0);
    assert_eq!(m["rows"], 5);
    assert_eq!(m["failed_rows"], 0);
    assert_eq!(m["row_wall_ms"].as_array().unwrap().len(), 5);
}

#[test]
fn seed_changes_the_simulated_column_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "quick.cfg", NEAREST);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(skycov(&["run", &cfg, "--out", a.to_str().unwrap(), "--seed", "1"]).status.success());
    assert!(skycov(&["run", &cfg, "--out", b.to_str().unwrap(), "--seed", "2"]).status.success());
    let read = |d: &Path| fs::read_to_string(d.join("quick.csv")).unwrap();
    let (ta, tb) = (read(&a), read(&b));
    assert_ne!(ta, tb);
    let col = |t: &str, i: usize| t.lines().skip(1).map(|l| l.split(',').nth(i).unwrap().to_string()).collect::<Vec<_>>();
    assert_eq!(col(&ta, 1), col(&tb, 1));
    assert_ne!(col(&ta, 3), col(&tb, 3));
}

#[test]
fn low_altitude_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "low.cfg", &format!("{NEAREST}uav.h_d = 25\n"));
    let r = skycov(&["validate", &cfg]);
    assert_eq!(r.status.code(), Some(1));
    assert!(stderr(&r).contains("h_d > h_BS"), "{}", stderr(&r));
    let r = skycov(&["run", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1));
    assert!(!dir.path().join("o").exists());
}

#[test]
fn penalty_above_one_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "beta.cfg",
        "mode = mobile-nearest\nmobility.beta = 1.5\nsweep.param = theta\nsweep.values = 0\n",
    );
    let r = skycov(&["validate", &cfg]);
    assert_eq!(r.status.code(), Some(1));
    assert!(stderr(&r).contains("beta"), "{}", stderr(&r));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.cfg",
        "mode = static-comp\n# comment\nnetwork.h_bs = high\nsweep.param = theta\nnetowrk.m_l = 3\nsweep.values =\n",
    );
    let r = skycov(&["validate", &cfg]);
    assert_eq!(r.status.code(), Some(1));
    let e = stderr(&r);
    assert!(e.contains("line 3") && e.contains("network.h_bs"), "{e}");
    assert!(e.contains("line 5") && e.contains("netowrk.m_l"), "{e}");
    assert!(e.contains("line 6"), "{e}");
}

#[test]
fn empty_grid_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "empty.cfg", "mode = gue\nsweep.param = theta\nsweep.values =\n");
    assert_eq!(skycov(&["validate", &cfg]).status.code(), Some(1));
}

#[test]
fn reference_preset_validates() {
    let r = skycov(&["validate", "--preset", "table1"]);
    assert!(r.status.success(), "{}", stderr(&r));
    assert!(String::from_utf8_lossy(&r.stdout).contains("estimated"));
}

#[test]
fn partial_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    // a UAV at rest has no simulated handover rate; the moving point still runs
    let cfg = write(
        dir.path(),
        "ho.cfg",
        "name = ho\nmode = mobile-comp\nmetric = handover-rate\nmobility.vbar = 30\nsweep.param = vbar\nsweep.values = 0, 30\nmc.samples = 2000\n",
    );
    let out = dir.path().join("o");
    let r = skycov(&["run", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2), "{}", stderr(&r));
    let t = fs::read_to_string(out.join("ho.csv")).unwrap();
    let rows: Vec<&str> = t.lines().skip(1).collect();
    assert!(rows[0].starts_with("0,") && rows[0].contains("error:"), "{t}");
    assert!(rows[1].starts_with("30,") && rows[1].ends_with(",ok"), "{t}");
}

#[test]
fn handover_figure_runs_within_budget() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig");
    let r = skycov(&["figure", "fig5a", "--out", out.to_str().unwrap(), "--samples", "20000"]);
    assert!(r.status.success(), "{}", stderr(&r));
    let budget = preset("fig5a").unwrap().budget_s;
    let mut total_ms = 0.0;
    for hb in ["0", "30", "50"] {
        let name = format!("fig5a_hbar{hb}");
        let t = fs::read_to_string(out.join(format!("{name}.csv"))).unwrap();
        assert!(t.starts_with("lambda_b_per_km2,"));
        assert_eq!(t.lines().count(), 7);
        let m: serde_json::Value = serde_json::from_slice(&fs::read(out.join(format!("{name}.manifest.json"))).unwrap()).unwrap();
        total_ms += m["total_runtime_ms"].as_f64().unwrap();
    }
    assert!(total_ms / 1e3 <= budget);
}

#[test]
fn presets_are_listed() {
    let r = skycov(&["list-presets"]);
    assert!(r.status.success());
    let s = String::from_utf8_lossy(&r.stdout);
    for id in ["table1", "fig2a", "fig5a", "fig6c"] {
        assert!(s.lines().any(|l| l.starts_with(id)), "{s}");
    }
}

#[test]
fn unknown_preset_is_a_config_error() {
    assert_eq!(skycov(&["figure", "fig9z"]).status.code(), Some(1));
}
