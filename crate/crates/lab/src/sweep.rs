//! Parameter sweeps: lifespan against `ε`, Cauchy rate against `δ`.

use std::path::Path;

use boussinesq::diagnostics::Verdict;
use boussinesq::solvers::{cauchy_study, fit_line, limit_extract, CauchyReport, MollifiedConfig};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{CaseSelector, RunConfig, SystemKind};
use crate::data::initial_state;
use crate::error::{invalid, LabError, LabResult};
use crate::run::{execute, status};

/// One member of a lifespan sweep.
#[derive(Debug, Clone)]
pub struct LifespanPoint {
    pub eps: f64,
    pub t_end: f64,
    pub verdict: Verdict,
}

impl LifespanPoint {
    pub fn blowup_time(&self) -> Option<f64> {
        match self.verdict {
            Verdict::BlownUp { time, .. } => Some(time),
            Verdict::Healthy => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LifespanSummary {
    pub points: Vec<LifespanPoint>,
    /// `(α, ln C)` with `T ≈ C ε^{-α}`, from the blown-up members.
    pub fit: Option<(f64, f64)>,
}

/// Run `cfg` once per `ε`, each to `t_budget / ε`.
pub fn sweep_lifespan(cfg: &RunConfig, eps_list: &[f64], root: &Path) -> LabResult<LifespanSummary> {
    if eps_list.len() < 3 {
        return Err(LabError::Config(format!("lifespan sweep needs at least 3 eps values, got {}", eps_list.len())));
    }
    if !(cfg.sweep_budget > 0.0) {
        return Err(LabError::Config("sweep.t_budget must be positive".into()));
    }
    let base = root.join(&cfg.output_dir);
    let points = eps_list
        .par_iter()
        .enumerate()
        .map(|(i, &eps)| {
            let mut c = cfg.clone();
            c.eps = eps;
            c.t_end = cfg.sweep_budget / eps;
            c.output_dir = format!("eps_{i:02}");
            let sim = execute(&c, &base)?;
            Ok(LifespanPoint { eps, t_end: c.t_end, verdict: sim.verdict })
        })
        .collect::<LabResult<Vec<_>>>()?;
    let (x, y): (Vec<f64>, Vec<f64>) =
        points.iter().filter_map(|p| p.blowup_time().map(|t| ((1.0 / p.eps).ln(), t.ln()))).unzip();
    let fit = if x.len() >= 2 { fit_line(&x, &y) } else { None };
    let summary = LifespanSummary { points, fit };
    write_lifespan(&summary, &base)?;
    Ok(summary)
}

fn write_lifespan(s: &LifespanSummary, dir: &Path) -> LabResult<()> {
    let mut w = csv::Writer::from_path(dir.join("summary.csv"))?;
    w.write_record(["eps", "t_end", "status", "blowup_time"])?;
    for p in &s.points {
        let t = p.blowup_time().map(|t| format!("{t:?}")).unwrap_or_default();
        w.write_record([format!("{:?}", p.eps), format!("{:?}", p.t_end), status(&p.verdict), t])?;
    }
    w.flush()?;
    let points: Vec<_> = s
        .points
        .iter()
        .map(|p| json!({ "eps": p.eps, "t_end": p.t_end, "status": status(&p.verdict), "blowup_time": p.blowup_time() }))
        .collect();
    let fit = s.fit.map(|(a, c)| json!({ "exponent": a, "log_constant": c }));
    let doc = json!({ "points": points, "fit": fit });
    std::fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&doc).unwrap() + "\n")?;
    Ok(())
}


/// Cauchy study of the mollified system; data are taken in `(η, v)`.
pub fn sweep_cauchy(cfg: &RunConfig, deltas: &[f64], root: &Path) -> LabResult<CauchyReport> {
    if deltas.len() < 3 {
        return Err(LabError::Config(format!("Cauchy sweep needs at least 3 deltas, got {}", deltas.len())));
    }
    let mut c = cfg.clone();
    c.system = SystemKind::EtaV;
    c.case = CaseSelector::Tag(12);
    let s0 = initial_state(&c)?;
    let integ = c.integrator()?;
    let report = cauchy_study(deltas, c.eps, &integ, c.dealias, &s0).map_err(invalid)?;
    let dir = root.join(&cfg.output_dir);
    std::fs::create_dir_all(&dir)?;
    let grid = s0.grid().clone();
    let mut w = csv::Writer::from_path(dir.join("pairs.csv"))?;
    w.write_record(["delta_a", "delta_b", "distance"])?;
    for p in &report.pairs {
        w.write_record([p.delta_a, p.delta_b, p.distance].map(|x| format!("{x:?}")))?;
    }
    w.flush()?;
    let nyquist: Vec<_> = report
        .deltas
        .iter()
        .map(|&d| {
            let m = MollifiedConfig::new(d, c.eps, integ).map_err(invalid)?;
            Ok(json!({ "delta": d, "symbol": m.nyquist_symbol(&grid), "transparent": m.is_transparent(&grid) }))
        })
        .collect::<LabResult<_>>()?;
    let limit = limit_extract(&report)
        .ok()
        .map(|l| json!({ "delta": l.delta, "error_bar": l.error_bar, "residual": l.residual, "within_bar": l.within_bar() }));
    let pairs: Vec<_> =
        report.pairs.iter().map(|p| json!({ "delta_a": p.delta_a, "delta_b": p.delta_b, "distance": p.distance })).collect();
    let doc = json!({
        "eps": report.eps,
        "dt": integ.dt,
        "t_end": integ.t_end,
        "deltas": report.deltas,
        "slope": report.slope,
        "intercept": report.intercept,
        "degenerate": report.degenerate,
        "partial": report.partial,
        "pairs": pairs,
        "nyquist": nyquist,
        "limit": limit,
    });
    std::fs::write(dir.join("study.json"), serde_json::to_string_pretty(&doc).unwrap() + "\n")?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> RunConfig {
        let mut c = RunConfig::new(CaseSelector::Tag(7), 0.1, 32, 0.01, 0.1);
        c.sweep_budget = 0.01;
        c
    }

    #[test]
    fn short_lists_are_config_errors() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(sweep_lifespan(&base(), &[0.1, 0.05], dir.path()).unwrap_err().exit_code(), 2);
        assert_eq!(sweep_cauchy(&base(), &[0.2, 0.1], dir.path()).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn lifespan_sweep_writes_one_row_per_eps() {
        let dir = tempfile::tempdir().unwrap();
        let s = sweep_lifespan(&base(), &[0.2, 0.1, 0.05], dir.path()).unwrap();
        assert_eq!(s.points.len(), 3);
        assert!(s.points.iter().all(|p| p.verdict.is_healthy()) && s.fit.is_none());
        let text = std::fs::read_to_string(dir.path().join("run/summary.csv")).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(dir.path().join("run/eps_02/timeseries.csv").exists());
    }

    #[test]
    fn cauchy_sweep_writes_the_study() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = base();
        c.n = 64;
        c.t_end = 0.05;
        let r = sweep_cauchy(&c, &[0.4, 0.2, 0.1], dir.path()).unwrap();
        assert_eq!(r.pairs.len(), 3);
        let doc: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("run/study.json")).unwrap()).unwrap();
        assert_eq!(doc["nyquist"].as_array().unwrap().len(), 3);
    }
}
