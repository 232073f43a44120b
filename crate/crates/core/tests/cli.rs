use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn microswarm(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_microswarm"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn data_rows(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().skip(1).map(String::from).collect()
}

#[test]
fn zero_horizon_run_writes_one_block() {
    let dir = tempfile::tempdir().unwrap();
    let out = microswarm(&["run", "--t-end", "0", "--out", "o"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let snaps = data_rows(&dir.path().join("o/snapshots.csv"));
    assert_eq!(snaps.len(), 200);
    assert!(snaps.iter().all(|r| r.starts_with("0.0000000000000000e0,")));
    let metrics = fs::read_to_string(dir.path().join("o/metrics.csv")).unwrap();
    assert_eq!(
        metrics,
        "t,mass_total,density_at_target,vicinity_mass\n\
         0.0000000000000000e0,1.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0\n"
    );
}

#[test]
fn sweep_with_one_point_has_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = microswarm(
        &["sweep", "--vd", "0.2", "--n0", "0.05", "--t-end", "2", "--cells", "50", "--out", "s"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = data_rows(&dir.path().join("s/sweep.csv"));
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("2.0000000000000001e-1,5.0000000000000003e-2,"));
}

#[test]
fn compare_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = microswarm(&["compare", "--cells", "50", "--out", "c"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["metrics_free.csv", "metrics_no_comm.csv", "metrics_comm.csv"] {
        assert_eq!(data_rows(&dir.path().join("c").join(f)).len(), 201);
    }
    let report = data_rows(&dir.path().join("c/report.csv"));
    assert_eq!(report.len(), 1);
    let cols: Vec<f64> = report[0].split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(cols[0], 10.0);
    assert_eq!(cols[4], cols[3] / cols[2]);
}

#[test]
fn config_file_overrides_preset() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.toml"), "[grid]\nn_cells = 40\n\n[numerics]\nt_end = 0.0\n").unwrap();
    let out = microswarm(&["run", "--config", "c.toml", "--out", "o"], dir.path());
    assert!(out.status.success());
    assert_eq!(data_rows(&dir.path().join("o/snapshots.csv")).len(), 40);
}

#[test]
fn preset_output_loads_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = microswarm(&["preset", "--three-state"], dir.path());
    assert!(out.status.success());
    fs::write(dir.path().join("p.toml"), &out.stdout).unwrap();
    let run = microswarm(&["run", "--config", "p.toml", "--t-end", "0", "--out", "o"], dir.path());
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(data_rows(&dir.path().join("o/snapshots.csv"))[0].split(',').count() == 7);
}

#[test]
fn errors_are_one_machine_readable_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.toml"), "[[states]]\n[[states]]\nchemotaxis = { sped = 1.0 }\n").unwrap();
    let out = microswarm(&["run", "--config", "bad.toml"], dir.path());
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error kind=unknown-key message="), "{err}");
    assert!(err.contains("states[1].chemotaxis.sped"));

    let out = microswarm(&["run", "--t-end", "-1"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error kind=invalid-config"));
}

#[test]
fn existing_outputs_need_force() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["run", "--t-end", "0", "--out", "o"];
    assert!(microswarm(&args, dir.path()).status.success());
    let again = microswarm(&args, dir.path());
    assert!(!again.status.success());
    assert!(String::from_utf8(again.stderr).unwrap().starts_with("error kind=would-overwrite"));
    let forced = microswarm(&["run", "--t-end", "0", "--out", "o", "--force"], dir.path());
    assert!(forced.status.success());
}

#[test]
fn abm_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a", "b"] {
        let o = microswarm(
            &["abm", "--agents", "5000", "--seed", "3", "--t-end", "0.5", "--cells", "50", "--out", out],
            dir.path(),
        );
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["abm_snapshots.csv", "abm_metrics.csv", "l1_distance.csv"] {
        let a = fs::read(dir.path().join("a").join(f)).unwrap();
        let b = fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
}
