use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mzi_parity::sweep::read_csv;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzi-parity")).args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> Vec<u8> {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sweeps_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["csv", "json"] {
        let a = dir.path().join(format!("a.{format}"));
        let b = dir.path().join(format!("b.{format}"));
        for p in [&a, &b] {
            run_ok(&[
                "sweep",
                "--state",
                "berry-wiseman",
                "--n-min",
                "1",
                "--n-max",
                "30",
                "--format",
                format,
                "--out",
                path_str(p),
            ]);
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap(), "{format}");
    }
    let first = run_ok(&["table"]);
    assert_eq!(first, run_ok(&["table"]));

    let (d1, d2) = (dir.path().join("f1"), dir.path().join("f2"));
    for d in [&d1, &d2] {
        fs::create_dir(d).unwrap();
        run_ok(&["figure", "fig2", "--out", path_str(d)]);
    }
    assert_eq!(fs::read(d1.join("fig2.csv")).unwrap(), fs::read(d2.join("fig2.csv")).unwrap());
}

#[test]
fn csv_round_trips() {
    let stdout = run_ok(&["sweep", "--state", "yurke", "--n-min", "2", "--n-max", "12", "--phi", "0.3"]);
    let records = read_csv(stdout.as_slice()).unwrap();
    assert_eq!(records.iter().map(|r| r.n).collect::<Vec<_>>(), [2, 4, 6, 8, 10, 12]);
    let mut again = Vec::new();
    mzi_parity::sweep::write_csv(&records, &mut again).unwrap();
    assert_eq!(again, stdout);
    for r in &records {
        assert_eq!(r.phi, Some(0.3));
        let (e, v) = (r.expectation.unwrap(), r.variance.unwrap());
        assert!((e * e + v * v - 1.0).abs() < 1e-12);
    }
}

#[test]
fn no_family_beats_the_heisenberg_limit() {
    for state in [
        "coherent",
        "single-fock",
        "dual-fock",
        "yurke",
        "yuen",
        "modified-yuen",
        "pezze-smerzi",
        "berry-wiseman",
        "noon",
        "noon-internal",
        "combined",
    ] {
        let mut args = vec!["sweep", "--state", state, "--n-min", "1", "--n-max", "30", "--limit"];
        if state == "combined" {
            args.extend(["--alpha", "0.6", "--beta", "0.8", "--theta", "0.5"]);
        }
        let records = read_csv(run_ok(&args).as_slice()).unwrap();
        assert!(!records.is_empty(), "{state}");
        for r in records {
            assert!(r.delta_phi >= r.heisenberg * (1.0 - 1e-9), "{state} N={}: {}", r.n, r.delta_phi);
        }
    }
}

#[test]
fn noon_limit_is_one_over_n() {
    let records = read_csv(run_ok(&["sweep", "--state", "noon", "--n-min", "1", "--n-max", "20"]).as_slice()).unwrap();
    assert_eq!(records.len(), 20);
    for r in records {
        assert!((r.delta_phi - 1.0 / f64::from(r.n)).abs() < 1e-9, "N={}", r.n);
        assert!(r.phi.is_none());
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["sweep", "--state", "squeezed", "--n", "4"]).status.code(), Some(2));
    assert_eq!(run(&["expectation", "--state", "pezze-smerzi", "--n", "5"]).status.code(), Some(2));
    let out = run(&["sweep", "--state", "noon", "--n", "4", "--out", "/nonexistent-dir/out.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# dual Fock sweep\nstate_label = dual-fock\nn_min = 2\nn_max = 10\nformat = json\n").unwrap();
    let from_file: serde_json::Value = serde_json::from_slice(&run_ok(&["sweep", "--config", path_str(&cfg)])).unwrap();
    assert_eq!(from_file.as_array().unwrap().len(), 5);

    let overridden = run_ok(&["sweep", "--config", path_str(&cfg), "--n-max", "4", "--format", "csv"]);
    let records = read_csv(overridden.as_slice()).unwrap();
    assert_eq!(records.iter().map(|r| r.n).collect::<Vec<_>>(), [2, 4]);

    fs::write(&cfg, "state_label = noon\nbogus = 1\n").unwrap();
    assert_eq!(run(&["sweep", "--config", path_str(&cfg)]).status.code(), Some(2));
}

#[test]
fn expectation_reports_the_state() {
    let out: serde_json::Value =
        serde_json::from_slice(&run_ok(&["expectation", "--state", "pezze-smerzi", "--n", "4", "--phi", "0.2"]))
            .unwrap();
    assert_eq!(out["N"], 4);
    assert_eq!(out["fock_notation"], "0.70710678 |3>_a|1>_b + 0.70710678 |1>_a|3>_b");
    let e = out["result"]["expectation"].as_f64().unwrap();
    assert!(e.abs() <= 1.0);
}
