use std::path::Path;
use std::process::{Command, Output};

use plasmon_core::config::builtin;
use plasmon_core::output::{csv_metadata, scenario_from_csv, scenario_from_json};

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_plasmon-sim"));
    cmd.args(args);
    match threads {
        Some(n) => cmd.env("PLASMON_SIM_THREADS", n),
        None => cmd.env_remove("PLASMON_SIM_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str], threads: Option<&str>) -> Output {
    let mut all = args.to_vec();
    all.extend(["--out", dir.to_str().unwrap()]);
    run(&all, threads)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

#[test]
fn fig2_writes_both_tables_with_delta0() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["fig2"], None);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in ["fig2_yield.csv", "fig2_power.csv"] {
        let text = std::fs::read_to_string(dir.path().join(f)).unwrap();
        let d0: f64 = csv_metadata(&text, "delta0_ev").unwrap().parse().unwrap();
        assert!((d0 - 5.8e-5).abs() < 1e-12, "{d0}");
        assert_eq!(data_rows(&text).len(), 2001);
        assert_eq!(scenario_from_csv(&text).unwrap(), builtin("fig2").unwrap());
    }
}

#[test]
fn fig1c_columns() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(dir.path(), &["fig1c", "--grid", "11"], None).status.success());
    let text = std::fs::read_to_string(dir.path().join("fig1c.csv")).unwrap();
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "detuning_ev,phi_rad_cavity,phi_rad_bare,phi_abs_cavity,phi_abs_bare");
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r.split(',').count() == 5));
}

#[test]
fn eigen_sweep_gives_eleven_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["eigen", "--config", "fig4", "--sweep", "-10e-3:10e-3:2e-3"], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("eigen.csv")).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 11);
    let first: f64 = rows[0].split(',').next().unwrap().parse().unwrap();
    let last: f64 = rows[10].split(',').next().unwrap().parse().unwrap();
    assert!((first + 0.01).abs() < 1e-15 && (last - 0.01).abs() < 1e-15);
}

#[test]
fn validate_prints_parameters_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.toml");
    std::fs::write(&path, plasmon_core::config::builtin_text("fig2").unwrap()).unwrap();
    let o = run(&["validate", path.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("G_ev") && out.contains("paper_exact"));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    let text = plasmon_core::config::builtin_text("fig1c").unwrap().replace("q_factor", "qfactor");
    std::fs::write(&path, text).unwrap();
    let o = run(&["validate", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    let e = stderr(&o);
    assert!(e.starts_with("ERROR[config]:") && e.contains("q_factor"), "{e}");

    let o = run(&["fig1c", "--config", dir.path().join("missing.toml").to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["fig1c", "--sweep", "1:0:0.1"], None);
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["fig1c", "--bogus"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("ERROR[usage]:"));

    let o = run(&["validate", "fig1c"], Some("0"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn numerical_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["fig1c", "--config", "fig2"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("ERROR[domain]:"));
}

#[test]
fn json_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(dir.path(), &["yield", "--grid", "5", "--format", "json"], None).status.success());
    let text = std::fs::read_to_string(dir.path().join("yield.json")).unwrap();
    let mut expect = builtin("fig2").unwrap();
    expect.sweep.points = 5;
    expect.sweep.distance_points = 5;
    expect.sweep.q_points = 5;
    expect.run.time_points = 5;
    assert_eq!(scenario_from_json(&text).unwrap(), expect);
}

#[test]
fn small_map_and_optq() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(dir.path(), &["map", "--grid", "3"], None).status.success());
    let text = std::fs::read_to_string(dir.path().join("map.csv")).unwrap();
    assert_eq!(data_rows(&text).len(), 9);
    let o = run_in(dir.path(), &["optq", "--distance", "10"], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("optq.csv")).unwrap();
    let row: Vec<f64> = data_rows(&text)[0].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row[3], 1.0);
    assert!(row[1] > 1e2 && row[1] < 1e7);
}

fn outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn figure_outputs_are_deterministic_across_runs_and_workers() {
    let runs: Vec<_> = [Some("1"), Some("4"), Some("4")]
        .iter()
        .map(|threads| {
            let dir = tempfile::tempdir().unwrap();
            for fig in ["fig1c", "fig2", "fig3", "fig4"] {
                let o = run_in(dir.path(), &[fig], *threads);
                assert!(o.status.success(), "{fig}: {}", stderr(&o));
            }
            outputs(dir.path())
        })
        .collect();
    assert_eq!(runs[0].len(), 7);
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[1], runs[2]);
}
