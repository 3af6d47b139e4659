use num_complex::Complex64;

use super::integrator::{evolve, Flow, IntegratorConfig};
use crate::error::{Error, Result};
use crate::spectral_ops::{bump, Field, Grid};
use crate::systems::{check_finite_modes, wave_block, Block, Evolution, Kit, Modes, State};
use crate::transforms::{depth, Calc, EtaV};

/// Regularization parameter and integrator shared by a mollified run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MollifiedConfig {
    pub delta: f64,
    pub eps: f64,
    pub integ: IntegratorConfig,
    pub dealias: bool,
}

impl MollifiedConfig {
    pub fn new(delta: f64, eps: f64, integ: IntegratorConfig) -> Result<MollifiedConfig> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::Parameter(format!("delta must be positive, got {delta}")));
        }
        if !(eps > 0.0) {
            return Err(Error::Parameter(format!("eps must be positive, got {eps}")));
        }
        integ.check()?;
        Ok(MollifiedConfig { delta, eps, integ, dealias: true })
    }

    pub fn with_dealias(mut self, on: bool) -> MollifiedConfig {
        self.dealias = on;
        self
    }

    /// `φ(δ ξ_max)` at the largest resolved wavenumber.
    pub fn nyquist_symbol(&self, grid: &Grid) -> f64 {
        let kmax = (0..grid.len()).map(|m| grid.xi2(m)).fold(0.0, f64::max).sqrt();
        bump(self.delta * kmax)
    }

    /// True when `J_δ` acts as the identity on every mode of `grid`.
    pub fn is_transparent(&self, grid: &Grid) -> bool {
        self.nyquist_symbol(grid) == 1.0
    }
}

/// The regularized `(η, v)` system
///
/// ```text
/// η_t + J∇·v = 0
/// v_t + (1 + εJη)(1 − εΔ)J∇η + εJ²∇·(J²v ⊗ J²v / (1 + εJη)) = 0
/// ```
///
/// with `J = J_δ`.
#[derive(Debug, Clone)]
pub struct Mollified {
    grid: Grid,
    cfg: MollifiedConfig,
    phi: Vec<f64>,
    phi2: Vec<f64>,
}

impl Mollified {
    pub fn new(grid: &Grid, cfg: MollifiedConfig) -> Mollified {
        let phi: Vec<f64> = (0..grid.len()).map(|m| bump(cfg.delta * grid.xi2(m).sqrt())).collect();
        let phi2 = phi.iter().map(|p| p * p).collect();
        Mollified { grid: grid.clone(), cfg, phi, phi2 }
    }

    pub fn config(&self) -> &MollifiedConfig {
        &self.cfg
    }
}

impl Evolution for Mollified {
    fn grid(&self) -> &Grid {
        &self.grid
    }

    fn ncomp(&self) -> usize {
        1 + self.grid.dim()
    }

    fn linear(&self, m: usize) -> Block {
        let p = self.phi[m];
        wave_block(&self.grid, m, p, p * (1.0 + self.cfg.eps * self.grid.xi2(m)))
    }

    fn nonlinear(&self, u: &[Vec<Complex64>]) -> Result<Modes> {
        check_finite_modes(u)?;
        let dim = self.grid.dim();
        let eps = self.cfg.eps;
        let kit = Kit::new(&self.grid, self.cfg.dealias);
        let mut jeta = u[0].clone();
        kit.scale(&mut jeta, &self.phi);
        let jeta_x = kit.real(&jeta);
        let (_, w) = depth(eps, &jeta_x)?;
        let v2: Vec<Vec<f64>> = u[1..]
            .iter()
            .map(|s| {
                let mut s = s.clone();
                kit.scale(&mut s, &self.phi2);
                kit.real(&s)
            })
            .collect();
        let lap = self.grid.laplacian(&jeta);
        let mut out = vec![vec![Complex64::new(0.0, 0.0); self.grid.len()]];
        for i in 0..dim {
            let g: Vec<Complex64> =
                kit.diff(&jeta, i).iter().zip(kit.diff(&lap, i)).map(|(a, b)| a - eps * b).collect();
            let mut acc = kit.product(&jeta_x, &kit.real(&g));
            let flux: Vec<Vec<Complex64>> = (0..dim)
                .map(|j| {
                    let p: Vec<f64> = (0..w.len()).map(|n| v2[i][n] * v2[j][n] * w[n]).collect();
                    kit.project(&p)
                })
                .collect();
            let mut div = kit.div(&flux);
            kit.scale(&mut div, &self.phi2);
            for (a, d) in acc.iter_mut().zip(&div) {
                *a = -eps * (*a + d);
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// `(η_t, v_t)` of the mollified system.
pub fn rhs_mollified(mcfg: &MollifiedConfig, eta: &Field, v: &[Field]) -> Result<(Field, Vec<Field>)> {
    let s = State::new(eta.clone(), v.to_vec(), 0.0)?;
    s.check_finite()?;
    let sys = Mollified::new(s.grid(), *mcfg);
    let d = State::from_modes(s.grid(), &sys.rhs(&s.to_modes())?, 0.0);
    Ok((d.eta, d.vel))
}

/// States saved every `report_every` steps.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<State>,
    /// Set when the run stopped early on a non-finite state.
    pub halted: bool,
}

impl Trajectory {
    pub fn last(&self) -> &State {
        self.states.last().expect("trajectory holds the initial state")
    }
}

fn record<E: Evolution>(sys: &E, integ: &IntegratorConfig, s0: &State) -> Result<Trajectory> {
    s0.check_finite()?;
    let grid = s0.grid().clone();
    let mut states = Vec::new();
    let out = evolve(integ, sys, s0.to_modes(), s0.time, |t, u| {
        states.push(State::from_modes(&grid, u, t));
        Ok(Flow::Continue)
    })?;
    Ok(Trajectory { states, halted: out.halted })
}

/// Evolve the mollified system from `s0` (given in `(η, v)`).
pub fn run_mollified(mcfg: &MollifiedConfig, s0: &State) -> Result<Trajectory> {
    record(&Mollified::new(s0.grid(), *mcfg), &mcfg.integ, s0)
}

/// Evolve the unregularized `(η, v)` system from `s0`.
pub fn run_eta_v(eps: f64, integ: &IntegratorConfig, dealias: bool, s0: &State) -> Result<Trajectory> {
    record(&EtaV::new(s0.grid(), eps)?.with_dealias(dealias), integ, s0)
}

/// Squared `X⁰_ε × L²` distance `|Δη|² + ε|∇Δη|² + |Δv|²`.
pub fn e0_distance(a: &State, b: &State, eps: f64) -> Result<f64> {
    if a.grid() != b.grid() || a.vel.len() != b.vel.len() {
        return Err(Error::GridMismatch("states on different grids".into()));
    }
    let grid = a.grid();
    let c = Calc::new(grid);
    let de: Vec<f64> = a.eta.values().iter().zip(b.eta.values()).map(|(x, y)| x - y).collect();
    let sq = |f: &[f64]| f.iter().map(|x| x * x).sum::<f64>() * grid.cell();
    let mut d = sq(&de) + eps * c.grad(&de).iter().map(|g| sq(g)).sum::<f64>();
    for (u, w) in a.vel.iter().zip(&b.vel) {
        let dv: Vec<f64> = u.values().iter().zip(w.values()).map(|(x, y)| x - y).collect();
        d += sq(&dv);
    }
    Ok(d)
}

/// Distance between two δ-runs, maximised over the common sample times.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDistance {
    pub delta_a: f64,
    pub delta_b: f64,
    pub distance: f64,
}

/// Result of [`cauchy_study`].
#[derive(Debug, Clone)]
pub struct CauchyReport {
    pub eps: f64,
    pub integ: IntegratorConfig,
    pub dealias: bool,
    pub deltas: Vec<f64>,
    pub runs: Vec<Trajectory>,
    pub pairs: Vec<PairDistance>,
    /// Least-squares fit of `ln d` against `ln max(δ, δ′)`.
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    /// Every pairwise distance is at roundoff level.
    pub degenerate: bool,
    /// Some run stopped early; distances only cover the common prefix.
    pub partial: bool,
}

impl CauchyReport {
    /// Fitted `d` at `max(δ, δ′) = delta`.
    pub fn fitted(&self, delta: f64) -> Option<f64> {
        Some((self.intercept? + self.slope? * delta.ln()).exp())
    }

    fn finest(&self) -> usize {
        (0..self.deltas.len()).min_by(|&i, &j| self.deltas[i].total_cmp(&self.deltas[j])).unwrap_or(0)
    }
}

/// Distances below this are treated as identical runs.
pub const DEGENERATE_DISTANCE: f64 = 1e-24;

/// Least-squares line through `(x, y)`; `None` without two distinct abscissae.
pub fn fit_line(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if x.len() < 2 || sxx < 1e-24 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Run one mollified trajectory per δ (in parallel) and fit the decay of
/// the pairwise distances in `max(δ, δ′)`.
pub fn cauchy_study(deltas: &[f64], eps: f64, integ: &IntegratorConfig, dealias: bool, s0: &State) -> Result<CauchyReport> {
    use rayon::prelude::*;
    if deltas.len() < 3 {
        return Err(Error::Parameter(format!("a Cauchy study needs at least 3 deltas, got {}", deltas.len())));
    }
    let cfgs = deltas
        .iter()
        .map(|&d| MollifiedConfig::new(d, eps, *integ).map(|c| c.with_dealias(dealias)))
        .collect::<Result<Vec<_>>>()?;
    let runs = cfgs.par_iter().map(|c| run_mollified(c, s0)).collect::<Result<Vec<_>>>()?;
    let common = runs.iter().map(|r| r.states.len()).min().unwrap_or(0);
    let partial = runs.iter().any(|r| r.halted || r.states.len() != common);
    let mut pairs = Vec::new();
    for i in 0..runs.len() {
        for j in i + 1..runs.len() {
            let mut d: f64 = 0.0;
            for k in 0..common {
                d = d.max(e0_distance(&runs[i].states[k], &runs[j].states[k], eps)?);
            }
            pairs.push(PairDistance { delta_a: deltas[i], delta_b: deltas[j], distance: d });
        }
    }
    let degenerate = pairs.iter().all(|p| p.distance < DEGENERATE_DISTANCE);
    let (mut slope, mut intercept) = (None, None);
    if !degenerate && !partial {
        let used: Vec<&PairDistance> = pairs.iter().filter(|p| p.distance.is_finite() && p.distance > 0.0).collect();
        let x: Vec<f64> = used.iter().map(|p| p.delta_a.max(p.delta_b).ln()).collect();
        let y: Vec<f64> = used.iter().map(|p| p.distance.ln()).collect();
        if let Some((s, c)) = fit_line(&x, &y) {
            slope = Some(s);
            intercept = Some(c);
        }
    }
    Ok(CauchyReport { eps, integ: *integ, dealias, deltas: deltas.to_vec(), runs, pairs, slope, intercept, degenerate, partial })
}

/// The finest-δ run taken as a stand-in for the unregularized solution.
#[derive(Debug, Clone)]
pub struct LimitProxy {
    pub delta: f64,
    pub trajectory: Trajectory,
    /// Bound on the squared distance to the limit implied by the fitted line.
    pub error_bar: f64,
    /// Measured squared distance to the unregularized run.
    pub residual: f64,
}

impl LimitProxy {
    pub fn within_bar(&self) -> bool {
        self.residual <= self.error_bar
    }
}

/// Designate the finest run as the limit proxy and measure it against the
/// unregularized flow.
///
/// With `d(δ, δ′) ≤ C max(δ, δ′)^α` the telescoping sum over `δ 2^{−k}`
/// bounds the squared distance to the limit by `C δ^α / (1 − 2^{−α/2})²`;
/// that is the error bar.
pub fn limit_extract(report: &CauchyReport) -> Result<LimitProxy> {
    let i = report.finest();
    let run = report.runs.get(i).ok_or_else(|| Error::FitFailed("empty study".into()))?;
    let delta = report.deltas[i];
    let error_bar = if report.degenerate {
        0.0
    } else {
        let alpha = report.slope.ok_or_else(|| Error::FitFailed("no slope was fitted".into()))?;
        if !(alpha > 0.0) {
            return Err(Error::FitFailed(format!("non-positive slope {alpha}")));
        }
        report.fitted(delta).unwrap() / (1.0 - 2f64.powf(-alpha / 2.0)).powi(2)
    };
    let s0 = &run.states[0];
    let exact = run_eta_v(report.eps, &report.integ, report.dealias, s0)?;
    let mut residual: f64 = 0.0;
    for (a, b) in run.states.iter().zip(&exact.states) {
        residual = residual.max(e0_distance(a, b, report.eps)?);
    }
    if exact.halted {
        residual = f64::INFINITY;
    }
    Ok(LimitProxy { delta, trajectory: run.clone(), error_bar, residual })
}
