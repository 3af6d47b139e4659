use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::systems::{zero_block, Block, Evolution, Modes, ZERO};

/// Time-stepping scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Classical RK4 on `e^{-tL}U`, with the linear part propagated exactly.
    Rk4IntegratingFactor,
    /// Classical RK4 on the full right-hand side.
    Rk4Plain,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Rk4IntegratingFactor => "rk4_integrating_factor",
            Scheme::Rk4Plain => "rk4_plain",
        }
    }

    pub fn parse(s: &str) -> Option<Scheme> {
        match s {
            "rk4_integrating_factor" => Some(Scheme::Rk4IntegratingFactor),
            "rk4_plain" => Some(Scheme::Rk4Plain),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub scheme: Scheme,
    pub dt: f64,
    pub t_end: f64,
    pub report_every: usize,
    pub dealias: bool,
}

/// RK4 is stable on the imaginary axis up to `2√2`.
pub const RK4_IMAGINARY_BOUND: f64 = 2.828;

impl IntegratorConfig {
    pub fn new(scheme: Scheme, dt: f64, t_end: f64) -> Result<IntegratorConfig> {
        let cfg = IntegratorConfig { scheme, dt, t_end, report_every: 1, dealias: true };
        cfg.check()?;
        Ok(cfg)
    }

    pub fn report_every(mut self, k: usize) -> IntegratorConfig {
        self.report_every = k.max(1);
        self
    }

    pub fn check(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Parameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::Parameter(format!("t_end must be >= 0, got {}", self.t_end)));
        }
        if self.report_every == 0 {
            return Err(Error::Parameter("report_every must be >= 1".into()));
        }
        Ok(())
    }

    /// Number of steps; `t_end / dt` rounded to the nearest integer.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

fn matmul(a: &Block, b: &Block, nc: usize) -> Block {
    let mut out = zero_block();
    for i in 0..nc {
        for j in 0..nc {
            let mut acc = ZERO;
            for k in 0..nc {
                acc += a[i][k] * b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

/// `e^{hL}` for blocks obeying `L³ = λ²L`, with `λ² = tr(L²)/2`.
///
/// Every linear part in this crate has eigenvalues `{±λ}` or `{0, ±λ}`,
/// which gives `e^{hL} = I + sinh(λh)/λ L + (cosh(λh) − 1)/λ² L²`.
pub fn block_exp(l: &Block, nc: usize, h: f64) -> Block {
    let l2 = matmul(l, l, nc);
    let tr: Complex64 = (0..nc).map(|i| l2[i][i]).sum();
    let lam2 = tr * 0.5;
    let z2 = lam2 * h * h;
    let (s, c) = if z2.norm() < 1e-4 {
        // Series in z² = (λh)².
        let s = h * (1.0 + z2 / 6.0 + z2 * z2 / 120.0 + z2 * z2 * z2 / 5040.0);
        let c = h * h * (0.5 + z2 / 24.0 + z2 * z2 / 720.0 + z2 * z2 * z2 / 40320.0);
        (s, c)
    } else {
        let lam = lam2.sqrt();
        let z = lam * h;
        (z.sinh() / lam, (z.cosh() - 1.0) / lam2)
    };
    let mut out = zero_block();
    for i in 0..nc {
        for j in 0..nc {
            out[i][j] = s * l[i][j] + c * l2[i][j];
        }
        out[i][i] += 1.0;
    }
    out
}

/// Largest `|λ|` of the linear part over all modes.
pub fn spectral_radius<E: Evolution + ?Sized>(sys: &E) -> f64 {
    let nc = sys.ncomp();
    (0..sys.grid().len())
        .map(|m| {
            let l = sys.linear(m);
            let l2 = matmul(&l, &l, nc);
            let tr: Complex64 = (0..nc).map(|i| l2[i][i]).sum();
            (tr * 0.5).norm().sqrt()
        })
        .fold(0.0, f64::max)
}

fn apply_blocks(blocks: &[Block], nc: usize, u: &[Vec<Complex64>]) -> Modes {
    let n = blocks.len();
    let mut out = vec![vec![ZERO; n]; nc];
    for (m, b) in blocks.iter().enumerate() {
        for i in 0..nc {
            let mut acc = ZERO;
            for j in 0..nc {
                acc += b[i][j] * u[j][m];
            }
            out[i][m] = acc;
        }
    }
    out
}

/// `a + s·b`, component-wise.
pub fn axpy(a: &[Vec<Complex64>], s: f64, b: &[Vec<Complex64>]) -> Modes {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + s * q).collect())
        .collect()
}

fn finite(u: &[Vec<Complex64>]) -> bool {
    u.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// RK4 stepper bound to one system and step size.
pub struct Integrator<'a, E: Evolution + ?Sized> {
    sys: &'a E,
    cfg: IntegratorConfig,
    full: Vec<Block>,
    half: Vec<Block>,
}

impl<'a, E: Evolution + ?Sized> Integrator<'a, E> {
    pub fn new(sys: &'a E, cfg: IntegratorConfig) -> Result<Integrator<'a, E>> {
        cfg.check()?;
        let nc = sys.ncomp();
        let (full, half) = match cfg.scheme {
            Scheme::Rk4IntegratingFactor => {
                let n = sys.grid().len();
                let mut full = Vec::with_capacity(n);
                let mut half = Vec::with_capacity(n);
                for m in 0..n {
                    let l = sys.linear(m);
                    full.push(block_exp(&l, nc, cfg.dt));
                    half.push(block_exp(&l, nc, 0.5 * cfg.dt));
                }
                (full, half)
            }
            Scheme::Rk4Plain => {
                let budget = cfg.dt * spectral_radius(sys);
                if budget > RK4_IMAGINARY_BOUND {
                    return Err(Error::StabilityBudget(budget));
                }
                (Vec::new(), Vec::new())
            }
        };
        Ok(Integrator { sys, cfg, full, half })
    }

    pub fn config(&self) -> &IntegratorConfig {
        &self.cfg
    }

    /// Advance one step of size `dt`.
    pub fn step(&self, u: &[Vec<Complex64>]) -> Result<Modes> {
        let h = self.cfg.dt;
        let nc = self.sys.ncomp();
        match self.cfg.scheme {
            Scheme::Rk4Plain => {
                let k1 = self.sys.rhs(u)?;
                let k2 = self.sys.rhs(&axpy(u, 0.5 * h, &k1))?;
                let k3 = self.sys.rhs(&axpy(u, 0.5 * h, &k2))?;
                let k4 = self.sys.rhs(&axpy(u, h, &k3))?;
                Ok(combine(u, h, &k1, &k2, &k3, &k4))
            }
            Scheme::Rk4IntegratingFactor => {
                let k1 = self.sys.nonlinear(u)?;
                let eu_half = apply_blocks(&self.half, nc, u);
                let a = apply_blocks(&self.half, nc, &axpy(u, 0.5 * h, &k1));
                let k2 = self.sys.nonlinear(&a)?;
                let b = axpy(&eu_half, 0.5 * h, &k2);
                let k3 = self.sys.nonlinear(&b)?;
                let eu = apply_blocks(&self.full, nc, u);
                let c = axpy(&eu, h, &apply_blocks(&self.half, nc, &k3));
                let k4 = self.sys.nonlinear(&c)?;
                let ek1 = apply_blocks(&self.full, nc, &k1);
                let mid: Modes = k2
                    .iter()
                    .zip(&k3)
                    .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect())
                    .collect();
                let emid = apply_blocks(&self.half, nc, &mid);
                let mut out = eu;
                for i in 0..nc {
                    for m in 0..out[i].len() {
                        out[i][m] += h / 6.0 * (ek1[i][m] + 2.0 * emid[i][m] + k4[i][m]);
                    }
                }
                Ok(out)
            }
        }
    }
}

fn combine(
    u: &[Vec<Complex64>],
    h: f64,
    k1: &[Vec<Complex64>],
    k2: &[Vec<Complex64>],
    k3: &[Vec<Complex64>],
    k4: &[Vec<Complex64>],
) -> Modes {
    (0..u.len())
        .map(|i| {
            (0..u[i].len())
                .map(|m| u[i][m] + h / 6.0 * (k1[i][m] + 2.0 * k2[i][m] + 2.0 * k3[i][m] + k4[i][m]))
                .collect()
        })
        .collect()
}

/// What an observer wants after seeing a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Halt,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub state: Modes,
    pub time: f64,
    pub steps: usize,
    /// True when the observer stopped the run or the state left the finite range.
    pub halted: bool,
}

/// One step from `u` (convenience wrapper around [`Integrator`]).
pub fn step<E: Evolution + ?Sized>(cfg: &IntegratorConfig, sys: &E, u: &[Vec<Complex64>]) -> Result<Modes> {
    Integrator::new(sys, *cfg)?.step(u)
}

/// Advance `u0` from `t0` to `t0 + t_end`.
///
/// `observe` sees the initial state and every `report_every`-th step. A
/// non-finite step is reported once and ends the run.
pub fn evolve<E, F>(
    cfg: &IntegratorConfig,
    sys: &E,
    u0: Modes,
    t0: f64,
    mut observe: F,
) -> Result<Outcome>
where
    E: Evolution + ?Sized,
    F: FnMut(f64, &Modes) -> Result<Flow>,
{
    let integ = Integrator::new(sys, *cfg)?;
    let steps = cfg.steps();
    let mut u = u0;
    if observe(t0, &u)? == Flow::Halt {
        return Ok(Outcome { state: u, time: t0, steps: 0, halted: true });
    }
    for k in 1..=steps {
        u = integ.step(&u)?;
        let t = t0 + k as f64 * cfg.dt;
        let ok = finite(&u);
        if !ok || k % cfg.report_every == 0 {
            let flow = observe(t, &u)?;
            if flow == Flow::Halt || !ok {
                return Ok(Outcome { state: u, time: t, steps: k, halted: true });
            }
        }
    }
    Ok(Outcome { state: u, time: t0 + steps as f64 * cfg.dt, steps, halted: false })
}

/// Advance without observation.
pub fn integrate<E: Evolution + ?Sized>(cfg: &IntegratorConfig, sys: &E, u0: Modes) -> Result<Modes> {
    let out = evolve(cfg, sys, u0, 0.0, |_, _| Ok(Flow::Continue))?;
    if out.halted {
        return Err(Error::NonFinite(out.time));
    }
    Ok(out.state)
}
