//! Single runs: simulation, monitoring and artifacts.

use std::path::{Path, PathBuf};

use boussinesq::diagnostics::{
    check_noncavitation, energy_quasilinear, energy_symmetrized, hamiltonian, mass, BlowupMonitor, BlowupReason,
    EnergyReport, Verdict,
};
use boussinesq::spectral_ops::{sobolev_norm, xsk_norm, Field};
use boussinesq::systems::{Abcd, CaseParams, Evolution, State};
use boussinesq::transforms::{curl, from_v_variable, to_v_variable, Bundle, EtaV};
use boussinesq::solvers::Integrator;
use serde_json::json;

use crate::config::{RunConfig, SystemKind};
use crate::data::initial_state;
use crate::error::{invalid, LabError, LabResult};
use crate::output::{write_csv, write_dump};

pub const SCHEMA_VERSION: u32 = 1;

fn norm(f: impl Fn(&Field) -> boussinesq::Result<f64>, comps: &[Field]) -> f64 {
    comps.iter().map(|c| f(c).map_or(f64::NAN, |x| x * x)).sum::<f64>().sqrt()
}

/// Diagnostics for a state in the unknowns of `cfg.system`.
pub fn report(cfg: &RunConfig, p: &CaseParams, s: &State) -> EnergyReport {
    let eps = cfg.eps;
    let sidx = cfg.sobolev_index();
    let order = if s.grid().dim() == 1 { 2 } else { 3 };
    let (u_state, v_state) = match cfg.system {
        SystemKind::Abcd => (Some(s.clone()), if p.registry_tag() == Some(12) { to_v_variable(s, eps).ok() } else { None }),
        SystemKind::EtaV => (from_v_variable(s, eps).ok(), Some(s.clone())),
    };
    let quasi = v_state
        .as_ref()
        .and_then(|v| Bundle::from_state(v, eps, order).ok())
        .and_then(|b| energy_quasilinear(&b).ok());
    let curl_norm = match (&u_state, s.grid().dim()) {
        (Some(u), 2) => Some(curl(&u.vel).map_or(f64::NAN, |c| c.max_abs())),
        (None, 2) => Some(f64::NAN),
        _ => None,
    };
    EnergyReport {
        time: s.time,
        hamiltonian: u_state.as_ref().and_then(|u| hamiltonian(p, u).ok()),
        energy_s: u_state.as_ref().and_then(|u| energy_symmetrized(p, u, sidx).ok()),
        quasilinear_e: quasi.map(|q| q.0),
        total_e: quasi.map(|q| q.1),
        mass: mass(s),
        noncavitation_margin: check_noncavitation(s, eps, cfg.depth_min),
        curl_norm,
        eta_hs: sobolev_norm(&s.eta, sidx).unwrap_or(f64::NAN),
        vel_hs: norm(|f| sobolev_norm(f, sidx), &s.vel),
        eta_xs: xsk_norm(&s.eta, sidx, 2, eps).unwrap_or(f64::NAN),
        vel_xs: norm(|f| xsk_norm(f, sidx, 1, eps), &s.vel),
    }
}

pub fn status(v: &Verdict) -> String {
    match v {
        Verdict::Healthy => "healthy".into(),
        Verdict::BlownUp { reason, .. } => format!("blown_up:{}", reason.name()),
    }
}

/// Everything a run produced, before anything is written.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub params: CaseParams,
    /// Report rows with their status tag.
    pub rows: Vec<(EnergyReport, String)>,
    pub verdict: Verdict,
    /// Reported states, kept only on request.
    pub states: Vec<State>,
    pub final_state: State,
}

impl Simulation {
    pub fn reports(&self) -> impl Iterator<Item = &EnergyReport> {
        self.rows.iter().map(|r| &r.0)
    }
}

fn blow_up_error(e: &boussinesq::Error) -> Option<BlowupReason> {
    match e {
        boussinesq::Error::Cavitation { .. } => Some(BlowupReason::Cavitation),
        boussinesq::Error::NonFinite(_) | boussinesq::Error::InvalidField(_) => Some(BlowupReason::NonFinite),
        _ => None,
    }
}

fn system(cfg: &RunConfig, p: &CaseParams) -> LabResult<Box<dyn Evolution>> {
    let g = cfg.grid()?;
    Ok(match cfg.system {
        SystemKind::Abcd => Box::new(Abcd::new(&g, *p).map_err(invalid)?.with_dealias(cfg.dealias)),
        SystemKind::EtaV => Box::new(EtaV::new(&g, cfg.eps).map_err(invalid)?.with_dealias(cfg.dealias)),
    })
}

/// Run `cfg` in memory.
pub fn simulate(cfg: &RunConfig, keep_states: bool) -> LabResult<Simulation> {
    cfg.validate()?;
    let p = cfg.params()?;
    let s0 = initial_state(cfg)?;
    let grid = s0.grid().clone();
    let sys = system(cfg, &p)?;
    let icfg = cfg.integrator()?;
    let integ = Integrator::new(sys.as_ref(), icfg).map_err(invalid)?;
    let mut monitor = BlowupMonitor::new(cfg.growth_factor);
    let mut rows = Vec::new();
    let mut states = Vec::new();
    let mut observe = |s: &State, rows: &mut Vec<(EnergyReport, String)>| {
        let r = report(cfg, &p, s);
        let v = monitor.push(&r);
        rows.push((r, status(&v)));
        if keep_states {
            states.push(s.clone());
        }
        v
    };
    let mut u = s0.to_modes();
    let mut verdict = observe(&s0, &mut rows);
    let mut last = s0;
    for k in 1..=icfg.steps() {
        if !verdict.is_healthy() {
            break;
        }
        let t = k as f64 * icfg.dt;
        match integ.step(&u) {
            Ok(next) => u = next,
            Err(e) => match blow_up_error(&e) {
                Some(reason) => {
                    verdict = Verdict::BlownUp { time: t, reason };
                    let r = EnergyReport { time: t, mass: f64::NAN, noncavitation_margin: f64::NAN, ..Default::default() };
                    rows.push((r, status(&verdict)));
                    break;
                }
                None => return Err(e.into()),
            },
        }
        let s = State::from_modes(&grid, &u, t);
        if k % icfg.report_every == 0 || !s.is_finite() {
            verdict = observe(&s, &mut rows);
        }
        last = s;
    }
    Ok(Simulation { params: p, rows, verdict, states, final_state: last })
}

fn verdict_json(v: &Verdict) -> serde_json::Value {
    match v {
        Verdict::Healthy => json!({ "status": "healthy" }),
        Verdict::BlownUp { time, reason } => json!({ "status": "blown_up", "time": time, "reason": reason.name() }),
    }
}

/// Where a run writes: `root/output.dir`.
pub fn run_dir(cfg: &RunConfig, root: &Path) -> PathBuf {
    root.join(&cfg.output_dir)
}

/// Simulate and write `timeseries.csv`, `manifest.json` and optional dumps.
pub fn execute(cfg: &RunConfig, root: &Path) -> LabResult<Simulation> {
    let sim = simulate(cfg, cfg.dumps)?;
    let dir = run_dir(cfg, root);
    std::fs::create_dir_all(&dir)?;
    write_csv(&dir.join("timeseries.csv"), &sim.rows)?;
    if cfg.dumps {
        let dumps = dir.join("dumps");
        std::fs::create_dir_all(&dumps)?;
        for (i, s) in sim.states.iter().enumerate() {
            write_dump(&dumps.join(format!("state_{i:06}.bsq")), s, cfg.eps)?;
        }
    }
    let manifest = json!({
        "schema_version": SCHEMA_VERSION,
        "code_version": env!("CARGO_PKG_VERSION"),
        "config": cfg.to_map(),
        "config_text": cfg.to_text(),
        "registry_case": sim.params.registry_tag(),
        "seed": cfg.data.seed,
        "initial_data": cfg.data.family.name(),
        "growth_factor": cfg.growth_factor,
        "rows": sim.rows.len(),
        "verdict": verdict_json(&sim.verdict),
        "csv_columns": crate::output::CSV_COLUMNS,
    });
    std::fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest).unwrap() + "\n")?;
    Ok(sim)
}

/// Read a run configuration, or the configuration echoed in a manifest.
pub fn load_config(path: &Path) -> LabResult<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        let v: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
        let inner = v
            .get("config_text")
            .and_then(|t| t.as_str())
            .ok_or_else(|| LabError::Config(format!("{}: manifest without config_text", path.display())))?;
        return RunConfig::parse(inner);
    }
    RunConfig::parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{CaseSelector, Family};

    fn small() -> RunConfig {
        let mut c = RunConfig::new(CaseSelector::Tag(7), 0.1, 32, 0.01, 0.1);
        c.report_every = 2;
        c
    }

    #[test]
    fn row_count_contract() {
        let sim = simulate(&small(), false).unwrap();
        assert_eq!(sim.rows.len(), 10 / 2 + 1);
        assert!(sim.verdict.is_healthy());
        assert!(sim.rows.iter().all(|r| r.1 == "healthy"));
    }

    #[test]
    fn zero_end_time_gives_one_row() {
        let mut c = small();
        c.t_end = 0.0;
        let sim = simulate(&c, false).unwrap();
        assert_eq!(sim.rows.len(), 1);
        assert_eq!(sim.rows[0].0.time, 0.0);
    }

    #[test]
    fn reports_fill_the_applicable_columns() {
        let sim = simulate(&small(), false).unwrap();
        let r = &sim.rows[0].0;
        assert!(r.energy_s.is_some() && r.hamiltonian.is_none() && r.quasilinear_e.is_none() && r.curl_norm.is_none());
        let mut c = small();
        c.system = SystemKind::EtaV;
        c.case = CaseSelector::Tag(12);
        let r = simulate(&c, false).unwrap().rows[0].0.clone();
        assert!(r.quasilinear_e.is_some() && r.total_e.is_some() && r.energy_s.is_none());
    }

    #[test]
    fn depth_floor_violation_stops_the_run() {
        let mut c = small();
        c.case = CaseSelector::Tag(12);
        c.system = SystemKind::EtaV;
        c.eps = 1.0;
        c.n = 64;
        c.data.family = Family::GaussianHump;
        c.data.amplitude = 0.5;
        c.data.width = 0.5;
        c.depth_min = 0.95;
        c.t_end = 4.0;
        c.report_every = 1;
        let sim = simulate(&c, false).unwrap();
        assert!(!sim.verdict.is_healthy(), "{:?}", sim.verdict);
        assert_eq!(sim.rows.last().unwrap().1, "blown_up:cavitation");
        assert!(sim.rows.len() < 401);
    }
}
