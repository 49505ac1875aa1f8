use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hvh_cli::parse_sweep_csv;
use hvh_cli::sweep::RowMode;
use hvh_core::entanglement::purity_from_r;

fn hvh(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hvh")).current_dir(dir).args(args).output().expect("run hvh")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn quantum_period_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = hvh(
        dir.path(),
        &["run", "--mode", "quantum", "--kappa", "1", "--t-max", "2pi", "--samples", "3", "--out", "q.csv"],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rows = parse_sweep_csv(&fs::read_to_string(dir.path().join("q.csv")).unwrap()).unwrap();
    let purity: Vec<f64> = rows.iter().map(|r| r.purity).collect();
    assert_eq!(rows.len(), 3);
    assert!((purity[0] - 1.0).abs() < 1e-12);
    assert!((purity[1] - purity_from_r(2.0)).abs() < 1e-12);
    assert!((purity[2] - 1.0).abs() < 1e-12);
}

#[test]
fn both_modes_write_two_rows_per_sample() {
    let dir = tempfile::tempdir().unwrap();
    let out = hvh(dir.path(), &["run", "--mode", "both", "--kappa", "1/4", "--out", "b.csv"]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert!(text.starts_with("omega_t,mode,R,S,U,purity,concurrence\n"));
    let rows = parse_sweep_csv(&text).unwrap();
    assert_eq!(rows.len(), 2 * 401);
    assert_eq!(rows.iter().filter(|r| r.mode == RowMode::Hybrid).count(), 401);
}

#[test]
fn half_coupling_is_maximally_entangled_after_one_period() {
    let dir = tempfile::tempdir().unwrap();
    let out = hvh(
        dir.path(),
        &["run", "--mode", "quantum", "--kappa", "1/2", "--t-max", "2pi", "--samples", "2", "--out", "c.csv"],
    );
    assert_eq!(code(&out), 0);
    let rows = parse_sweep_csv(&fs::read_to_string(dir.path().join("c.csv")).unwrap()).unwrap();
    assert!((rows[1].concurrence - 1.0).abs() < 1e-10);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.cfg"), "# test\nmode=hybrid\nsamples=4\nkappa=1\nout=from_file.csv\n").unwrap();
    let out = hvh(dir.path(), &["run", "--config", "run.cfg", "--samples", "6"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rows = parse_sweep_csv(&fs::read_to_string(dir.path().join("from_file.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.mode == RowMode::Hybrid));
}

#[test]
fn oracle_columns_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = hvh(
        dir.path(),
        &[
            "run",
            "--mode",
            "both",
            "--kappa",
            "1/2",
            "--t-max",
            "pi",
            "--samples",
            "3",
            "--oracle",
            "--oracle-grid",
            "121",
            "--out",
            "o.csv",
        ],
    );
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("oracle max deviation"), "{stdout}");
    let text = fs::read_to_string(dir.path().join("o.csv")).unwrap();
    assert!(text.lines().next().unwrap().ends_with(",purity_oracle,concurrence_oracle"));
    for r in parse_sweep_csv(&text).unwrap() {
        let (p, c) = r.oracle.unwrap();
        assert!((p - r.purity).abs() < 1e-6 && (c - r.concurrence).abs() < 1e-6);
    }
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["run", "--samples", "1"][..],
        &["run", "--kappa", "-1"],
        &["run", "--mode", "classical"],
        &["run", "--t-max", "0"],
        &["verify", "--suite", "bogus"],
        &["frobnicate"],
    ] {
        let out = hvh(dir.path(), args);
        assert_eq!(code(&out), 2, "{args:?}");
    }
    fs::write(dir.path().join("bad.cfg"), "samples=3\nwhat=1\n").unwrap();
    let out = hvh(dir.path(), &["run", "--config", "bad.cfg"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn unwritable_output_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = hvh(dir.path(), &["run", "--samples", "2", "--out", "missing/dir/x.csv"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn verify_exit_status_follows_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = hvh(dir.path(), &["verify", "--suite", "algebra"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).lines().all(|l| l.starts_with("PASS")));

    let out = hvh(dir.path(), &["verify", "--suite", "pde", "--grid", "51", "--tol", "1e-6"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn verify_oracle_suite_passes_at_fine_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = hvh(dir.path(), &["verify", "--suite", "oracle", "--grid", "801", "--tol", "1e-8"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}
