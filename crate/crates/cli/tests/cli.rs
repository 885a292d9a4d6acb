use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn lembas(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lembas"));
    cmd.args(args).env_remove("LEMBAS_NSTEPS_OVERRIDE");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

const SWAP: &str = r#"{"scenario": "swap_cooling",
  "parameters": {"deltaE_A": 1.0, "deltaE_B": 2.0, "g": 0.1, "beta_i": 1.0}}"#;

#[test]
fn run_swap_default_matches_closed_form_work() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "swap.json", SWAP);
    let out = dir.path().join("swap.csv");
    let o = lembas(&["run", p(&cfg), "--out", p(&out)], &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,U_A,dU_dt,dW_dt,dQ_dt,W_cum,Q_cum,S_A,dS_dt,T_star");
    let data = rows(&text);
    assert_eq!(data.len(), 2049);
    let (ea, eb, b) = (1.0f64, 2.0f64, 1.0f64);
    let z = (1.0 + (b * ea).exp()) * (1.0 + (b * eb).exp());
    let closed = ((b * ea).exp() - (b * eb).exp()) * (ea - eb) / z;
    let w: f64 = data.last().unwrap()[5].parse().unwrap();
    assert!((w - closed).abs() < 1e-6);
    let t: &str = &data[3][0];
    assert_eq!(t.split('e').next().unwrap().replace(['-', '.'], "").len(), 17);
}

#[test]
fn run_output_is_reproducible_and_uses_config_output() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("a.csv");
    let body = SWAP.replacen(
        "\"parameters\"",
        &format!("\"output\": {:?}, \"subsystem\": \"A\", \"parameters\"", p(&out)),
        1,
    );
    let cfg = write_config(&dir, "a.json", &body);
    assert!(lembas(&["run", p(&cfg)], &[]).status.success());
    let first = std::fs::read(&out).unwrap();
    assert!(lembas(&["run", p(&cfg)], &[]).status.success());
    assert_eq!(first, std::fs::read(&out).unwrap());
}

#[test]
fn free_tls_rows_have_zero_work_and_blank_temperature() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "tls.json",
        r#"{"scenario": "driven_tls", "parameters": {"deltaE": 1, "g": 0, "delta": 0, "beta": 2},
            "grid": {"t0": 0, "t1": 10, "n_steps": 100}, "frame": "lab"}"#,
    );
    let o = lembas(&["run", p(&cfg)], &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let data = rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(data.len(), 101);
    for r in &data {
        assert_eq!(r[3].parse::<f64>().unwrap(), 0.0);
        assert_eq!(r[9], "");
    }
}

#[test]
fn missing_parameter_exits_2_with_key_path() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "bad.json", r#"{"scenario": "driven_tls", "parameters": {"deltaE": 1, "omega": 1, "beta": 2}}"#);
    let o = lembas(&["run", p(&cfg)], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parameters.g"));
}

#[test]
fn unknown_keys_exit_2() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "bad.json", &SWAP.replacen('{', r#"{"frmae": "lab", "#, 1));
    assert_eq!(lembas(&["run", p(&cfg)], &[]).status.code(), Some(2));
    let cfg = write_config(&dir, "bad2.json", r#"{"scenario": "no_such", "parameters": {}}"#);
    assert_eq!(lembas(&["run", p(&cfg)], &[]).status.code(), Some(2));
}

#[test]
fn sweep_detuning_peaks_on_resonance() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "tls.json",
        r#"{"scenario": "driven_tls", "parameters": {"deltaE": 1, "g": 0.1, "omega": 1, "beta": 2}}"#,
    );
    let o = lembas(&["sweep", p(&cfg), "--param", "delta", "--from", "-0.5", "--to", "0.5", "--points", "11"], &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "delta,W_total,Q_total,eta");
    let data = rows(&text);
    assert_eq!(data.len(), 11);
    let best = data
        .iter()
        .max_by(|a, b| a[1].parse::<f64>().unwrap().total_cmp(&b[1].parse::<f64>().unwrap()))
        .unwrap();
    assert_eq!(best[0].parse::<f64>().unwrap(), 0.0);
    assert!(data.iter().all(|r| r[3].is_empty()));
}

#[test]
fn single_point_sweep_equals_run_totals() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "swap.json", SWAP);
    let sweep = lembas(&["sweep", p(&cfg), "--param", "g", "--from", "0.1", "--to", "0.1", "--points", "1"], &[]);
    assert!(sweep.status.success());
    let row = rows(&String::from_utf8(sweep.stdout).unwrap()).remove(0);
    let run = lembas(&["run", p(&cfg)], &[]);
    let last = rows(&String::from_utf8(run.stdout).unwrap()).pop().unwrap();
    assert_eq!(row[1], last[5]);
    assert_eq!(row[2], last[6]);
    assert!((row[3].parse::<f64>().unwrap() + 1.0).abs() < 1e-6);
}

#[test]
fn efficiency_does_not_depend_on_temperature() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "swap.json", SWAP);
    let out = dir.path().join("sweep.csv");
    let o = lembas(
        &["sweep", p(&cfg), "--param", "beta_i", "--from", "0.5", "--to", "3", "--points", "6", "--out", p(&out)],
        &[],
    );
    assert!(o.status.success());
    for r in rows(&std::fs::read_to_string(&out).unwrap()) {
        assert!((r[3].parse::<f64>().unwrap() + 1.0).abs() < 1e-6);
    }
}

#[test]
fn sweep_of_unknown_parameter_exits_2() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "swap.json", SWAP);
    let o = lembas(&["sweep", p(&cfg), "--param", "omega", "--from", "0", "--to", "1", "--points", "3"], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes_and_prints_summary_lines() {
    let o = lembas(&["verify"], &[]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("check id=")).count(), 9);
    assert!(text.lines().all(|l| !l.contains("status=fail")));
}

#[test]
fn verify_fails_on_coarse_grid() {
    let o = lembas(&["verify"], &[("LEMBAS_NSTEPS_OVERRIDE", "128")]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(text.contains("check id=4 name=first_law_closure status=fail"));
}
