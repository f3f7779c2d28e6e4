use std::process::Command;

fn hpla() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hpla"));
    cmd.env_remove("HONEI_CONFIG").env("RUST_LOG", "off");
    cmd
}

#[test]
fn poisson_prints_table() {
    let out = hpla().args(["poisson", "--level", "4", "--backend", "blocked"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 2 + 3, "{stdout}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("Converged"));
}

#[test]
fn poisson_non_convergence_exits_nonzero() {
    let out = hpla().args(["poisson", "--level", "3", "--tol", "1e-30"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn swe_writes_volume_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = hpla()
        .args(["swe", "--scenario", "uniform", "--grid", "16", "--steps", "3", "--snapshot-every", "3", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read_to_string(dir.path().join("volume.csv")).unwrap().lines().count(), 5);
    assert!(dir.path().join("height_000003.csv").exists());
}

#[test]
fn bad_arguments_exit_nonzero() {
    assert!(!hpla().args(["swe", "--scenario", "tsunami"]).output().unwrap().status.success());
    assert!(!hpla().args(["bench", "--backends", "gpu"]).output().unwrap().status.success());
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("rc");
    std::fs::write(&cfg, "worker_count = many\n").unwrap();
    let out = hpla().arg("--config").arg(&cfg).args(["poisson", "--level", "2"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn bench_emits_csv() {
    let out = hpla()
        .args(["bench", "--sizes", "64,128", "--backends", "generic,parallel", "--reps", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 5);
}
