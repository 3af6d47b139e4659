use std::path::Path;
use std::process::Command;

use boussinesq_lab::config::{CaseSelector, Family, RunConfig, SystemKind};

fn bsq(root: &Path, args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bsq"))
        .env("BSQ_OUTPUT_ROOT", root)
        .args(args)
        .output()
        .unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn config(dir: &Path, name: &str, c: &RunConfig) -> String {
    let p = dir.join(name);
    std::fs::write(&p, c.to_text()).unwrap();
    p.to_string_lossy().into_owned()
}

fn base() -> RunConfig {
    let mut c = RunConfig::new(CaseSelector::Tag(10), 0.1, 64, 0.01, 0.37);
    c.report_every = 4;
    c.data.family = Family::RandomBandlimited;
    c.data.seed = 5;
    c
}

#[test]
fn csv_rows_follow_the_report_cadence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "a.cfg", &base());
    assert_eq!(bsq(dir.path(), &["run", &cfg]).0, 0);
    let text = std::fs::read_to_string(dir.path().join("run/timeseries.csv")).unwrap();
    // floor(t_end / (dt * report_every)) + 1 data rows below the header
    assert_eq!(text.lines().count(), 1 + (0.37f64 / 0.04).floor() as usize + 1);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("run/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["verdict"]["status"], "healthy");
    assert_eq!(manifest["seed"], 5);
}

#[test]
fn flag_overrides_environment_and_manifest_replays_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "a.cfg", &base());
    let elsewhere = dir.path().join("flag");
    let flag = elsewhere.to_string_lossy().into_owned();
    assert_eq!(bsq(dir.path(), &["--output-root", &flag, "run", &cfg]).0, 0);
    let manifest = elsewhere.join("run/manifest.json").to_string_lossy().into_owned();
    let replay = dir.path().join("replay");
    assert_eq!(bsq(&replay, &["run", &manifest]).0, 0);
    let a = std::fs::read(elsewhere.join("run/timeseries.csv")).unwrap();
    let b = std::fs::read(replay.join("run/timeseries.csv")).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        std::fs::read(elsewhere.join("run/manifest.json")).unwrap(),
        std::fs::read(replay.join("run/manifest.json")).unwrap()
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let text = base().to_text();
    let write = |name: &str, body: String| {
        let p = d.join(name);
        std::fs::write(&p, body).unwrap();
        p.to_string_lossy().into_owned()
    };
    let malformed = write("m.cfg", format!("{text}no separator here\n"));
    let unknown = write("u.cfg", format!("{text}data.colour = red\n"));
    let missing = write("x.cfg", text.lines().filter(|l| !l.starts_with("grid.n ")).map(|l| format!("{l}\n")).collect());
    for cfg in [&malformed, &unknown, &missing] {
        assert_eq!(bsq(d, &["run", cfg]).0, 2, "{cfg}");
    }
    assert_eq!(bsq(d, &["run", "/definitely/not/here.cfg"]).0, 2);
    assert_eq!(bsq(d, &["frobnicate"]).0, 2);
    assert_eq!(bsq(d, &["acceptance", "no_such_suite"]).0, 2);

    let mut cavitating = base();
    cavitating.data.family = Family::GaussianHump;
    cavitating.data.amplitude = -20.0;
    assert_eq!(bsq(d, &["run", &config(d, "c.cfg", &cavitating)]).0, 3);
    let mut wrong_system = base();
    wrong_system.system = SystemKind::EtaV;
    assert_eq!(bsq(d, &["run", &config(d, "w.cfg", &wrong_system)]).0, 3);

    let sweep = config(d, "s.cfg", &base());
    assert_eq!(bsq(d, &["sweep-lifespan", &sweep, "--eps", "0.1,0.05"]).0, 2);
    assert_eq!(bsq(d, &["sweep-cauchy", &sweep]).0, 2);
}

#[test]
fn sweeps_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = base();
    c.sweep_budget = 0.02;
    c.output_dir = "life".into();
    let cfg = config(dir.path(), "s.cfg", &c);
    let (code, out) = bsq(dir.path(), &["sweep-lifespan", &cfg, "--eps", "0.2,0.1,0.05"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("eps")).count(), 3);
    assert!(dir.path().join("life/summary.json").exists());

    c.output_dir = "cauchy".into();
    c.t_end = 0.05;
    c.sweep_deltas = vec![0.4, 0.2, 0.1];
    let cfg = config(dir.path(), "c.cfg", &c);
    assert_eq!(bsq(dir.path(), &["sweep-cauchy", &cfg]).0, 0);
    assert!(dir.path().join("cauchy/pairs.csv").exists());
}

#[test]
fn acceptance_suite_prints_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = bsq(dir.path(), &["acceptance", "operators"]);
    assert_eq!(code, 0);
    let ids: Vec<u64> = out.lines().map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["criterion"].as_u64().unwrap()).collect();
    assert_eq!(ids, vec![1, 2]);
}

#[test]
fn shipped_configs_are_valid() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let c = boussinesq_lab::run::load_config(&path).unwrap();
        c.validate().unwrap();
        boussinesq_lab::data::initial_state(&c).unwrap();
        seen += 1;
    }
    assert!(seen >= 3);
}
