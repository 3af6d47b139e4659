use num_complex::Complex64;

use super::{
    check_finite_modes, radial_table, validate_params, wave_block, Block, CaseId, CaseParams,
    Evolution, Kit, Modes, State,
};
use crate::error::{Error, Result};
use crate::spectral_ops::{p_eps, t_eps, Grid};

fn zeros(grid: &Grid, nc: usize) -> Modes {
    vec![vec![Complex64::new(0.0, 0.0); grid.len()]; nc]
}

/// Fifth-order system with mass operators `1 - bε∂² + b₁ε²∂⁴` and `1 - dε∂² + d₁ε²∂⁴`.
#[derive(Debug, Clone)]
pub struct FifthOrder {
    grid: Grid,
    params: CaseParams,
    nonlinear: bool,
    dealias: bool,
    p: Vec<f64>,
    q: Vec<f64>,
    mass_b: Vec<f64>,
    mass_d: Vec<f64>,
    /// Symbol of `1 - bε∂²`.
    flux_b: Vec<f64>,
    /// Symbol of `1 + cε∂²`.
    flux_c: Vec<f64>,
}

impl FifthOrder {
    pub fn new(grid: &Grid, params: CaseParams) -> Result<FifthOrder> {
        if grid.dim() != 1 {
            return Err(Error::Dimension("the fifth-order system is one-dimensional".into()));
        }
        let p = validate_params(params.with_kind(CaseId::FifthOrder))?;
        let e = p.eps;
        let x = p.ext;
        let (a1, b1, c1, d1) = (x.a1.unwrap(), x.b1.unwrap(), x.c1.unwrap(), x.d1.unwrap());
        let mb = move |k2: f64| 1.0 + p.b * e * k2 + b1 * e * e * k2 * k2;
        let md = move |k2: f64| 1.0 + p.d * e * k2 + d1 * e * e * k2 * k2;
        Ok(FifthOrder {
            grid: grid.clone(),
            params: p,
            nonlinear: true,
            dealias: true,
            p: radial_table(grid, |k2| (1.0 - p.a * e * k2 + a1 * e * e * k2 * k2) / mb(k2)),
            q: radial_table(grid, |k2| (1.0 - p.c * e * k2 + c1 * e * e * k2 * k2) / md(k2)),
            mass_b: radial_table(grid, |k2| 1.0 / mb(k2)),
            mass_d: radial_table(grid, |k2| 1.0 / md(k2)),
            flux_b: radial_table(grid, |k2| 1.0 + p.b * e * k2),
            flux_c: radial_table(grid, |k2| 1.0 - p.c * e * k2),
        })
    }

    pub fn linear_only(mut self) -> FifthOrder {
        self.nonlinear = false;
        self
    }

    pub fn with_dealias(mut self, on: bool) -> FifthOrder {
        self.dealias = on;
        self
    }

    pub fn params(&self) -> &CaseParams {
        &self.params
    }
}

impl Evolution for FifthOrder {
    fn grid(&self) -> &Grid {
        &self.grid
    }

    fn ncomp(&self) -> usize {
        2
    }

    fn linear(&self, m: usize) -> Block {
        wave_block(&self.grid, m, self.p[m], self.q[m])
    }

    fn nonlinear(&self, u: &[Vec<Complex64>]) -> Result<Modes> {
        check_finite_modes(u)?;
        let mut out = zeros(&self.grid, 2);
        if !self.nonlinear {
            return Ok(out);
        }
        let k = Kit::new(&self.grid, self.dealias);
        let (e, p) = (self.params.eps, &self.params);
        let eta = k.real(&u[0]);
        let vel = k.real(&u[1]);
        let eta_xx_s = k.diff(&k.diff(&u[0], 0), 0);
        let eta_xx = k.real(&eta_xx_s);
        let u_x_s = k.diff(&u[1], 0);
        let u_xx_s = k.diff(&u_x_s, 0);
        let u_x = k.real(&u_x_s);
        let u_xx = k.real(&u_xx_s);
        let u_xxx = k.real(&k.diff(&u_xx_s, 0));

        let mut flux = k.product(&eta, &vel);
        k.scale(&mut flux, &self.flux_b);
        let hi = k.product(&eta, &u_xx);
        let g1 = (p.a + p.b - 1.0 / 3.0) * e * e;
        let total: Vec<Complex64> = flux.iter().zip(&hi).map(|(f, h)| e * f + g1 * h).collect();
        let mut eta_t = k.diff(&total, 0);
        k.scale(&mut eta_t, &self.mass_b);
        for (o, z) in out[0].iter_mut().zip(&eta_t) {
            *o = -z;
        }

        let mut adv = k.product(&vel, &u_x);
        k.scale(&mut adv, &self.flux_c);
        let ee = k.diff(&k.product(&eta, &eta_xx), 0);
        let uxuxx = k.product(&u_x, &u_xx);
        let uuxxx = k.product(&vel, &u_xxx);
        let (cd1, cd) = (p.c + p.d - 1.0, p.c + p.d);
        let mut u_t: Vec<Complex64> = (0..self.grid.len())
            .map(|m| -(e * adv[m]) - e * e * ee[m] + cd1 * e * e * uxuxx[m] + cd * e * e * uuxxx[m])
            .collect();
        k.scale(&mut u_t, &self.mass_d);
        out[1] = u_t;
        Ok(out)
    }
}

/// Full-dispersion system `η_t + T_ε∇·u + ε∇·(ηu) = 0`, `u_t + ∇η + (ε/2)∇|u|² = 0`.
///
/// With surface tension the operator `T_ε` is replaced by `P_ε`.
#[derive(Debug, Clone)]
pub struct FullDispersion {
    grid: Grid,
    eps: f64,
    nonlinear: bool,
    dealias: bool,
    t: Vec<f64>,
}

impl FullDispersion {
    pub fn new(grid: &Grid, params: CaseParams, surface_tension: bool) -> Result<FullDispersion> {
        let p = validate_params(params.with_kind(CaseId::FullDispersion))?;
        let op = if surface_tension { p_eps(p.eps, p.ext.beta_fd)? } else { t_eps(p.eps)? };
        let t = op.table(grid)?.into_iter().map(|z| z.re).collect();
        Ok(FullDispersion { grid: grid.clone(), eps: p.eps, nonlinear: true, dealias: true, t })
    }

    pub fn linear_only(mut self) -> FullDispersion {
        self.nonlinear = false;
        self
    }

    pub fn with_dealias(mut self, on: bool) -> FullDispersion {
        self.dealias = on;
        self
    }
}

/// Shared `-ε∇·(ηu)`, `-(ε/2)∇|u|²` transport terms.
fn transport(grid: &Grid, dealias: bool, eps: f64, u: &[Vec<Complex64>]) -> Modes {
    let k = Kit::new(grid, dealias);
    let dim = grid.dim();
    let eta = k.real(&u[0]);
    let vel: Vec<Vec<f64>> = u[1..].iter().map(|s| k.real(s)).collect();
    let flux: Vec<Vec<Complex64>> = vel.iter().map(|v| k.product(&eta, v)).collect();
    let mut out = vec![k.div(&flux).into_iter().map(|z| -eps * z).collect::<Vec<_>>()];
    let half_sq: Vec<f64> =
        (0..grid.len()).map(|i| 0.5 * vel.iter().map(|v| v[i] * v[i]).sum::<f64>()).collect();
    let ke = k.project(&half_sq);
    for axis in 0..dim {
        out.push(k.diff(&ke, axis).into_iter().map(|z| -eps * z).collect());
    }
    out
}

impl Evolution for FullDispersion {
    fn grid(&self) -> &Grid {
        &self.grid
    }

    fn ncomp(&self) -> usize {
        1 + self.grid.dim()
    }

    fn linear(&self, m: usize) -> Block {
        wave_block(&self.grid, m, self.t[m], 1.0)
    }

    fn nonlinear(&self, u: &[Vec<Complex64>]) -> Result<Modes> {
        check_finite_modes(u)?;
        if !self.nonlinear {
            return Ok(zeros(&self.grid, self.ncomp()));
        }
        Ok(transport(&self.grid, self.dealias, self.eps, u))
    }
}

/// Kaup system `η_t + u_x + (ε/3)u_xxx + ε(ηu)_x = 0`, `u_t + η_x + εuu_x = 0`.
///
/// Linearly ill-posed for `ξ² > 3/ε`, so grids resolving such modes are
/// refused unless explicitly overridden.
#[derive(Debug, Clone)]
pub struct Kaup {
    grid: Grid,
    eps: f64,
    nonlinear: bool,
    dealias: bool,
    p: Vec<f64>,
}

impl Kaup {
    pub fn new(grid: &Grid, params: CaseParams, allow_ill_posed: bool) -> Result<Kaup> {
        if grid.dim() != 1 {
            return Err(Error::Dimension("the Kaup system is one-dimensional".into()));
        }
        let p = validate_params(params.with_kind(CaseId::Kaup))?;
        let kmax2 = grid.nyquist().powi(2);
        let limit = 3.0 / p.eps;
        if kmax2 > limit && !allow_ill_posed {
            return Err(Error::IllPosedResolution { kmax2, limit });
        }
        let e = p.eps;
        Ok(Kaup {
            grid: grid.clone(),
            eps: e,
            nonlinear: true,
            dealias: true,
            p: radial_table(grid, |k2| 1.0 - e * k2 / 3.0),
        })
    }

    pub fn linear_only(mut self) -> Kaup {
        self.nonlinear = false;
        self
    }

    pub fn with_dealias(mut self, on: bool) -> Kaup {
        self.dealias = on;
        self
    }
}

impl Evolution for Kaup {
    fn grid(&self) -> &Grid {
        &self.grid
    }

    fn ncomp(&self) -> usize {
        2
    }

    fn linear(&self, m: usize) -> Block {
        wave_block(&self.grid, m, self.p[m], 1.0)
    }

    fn nonlinear(&self, u: &[Vec<Complex64>]) -> Result<Modes> {
        check_finite_modes(u)?;
        if !self.nonlinear {
            return Ok(zeros(&self.grid, 2));
        }
        // In 1D, ½(u²)_x = u u_x.
        Ok(transport(&self.grid, self.dealias, self.eps, u))
    }
}

fn derivative<E: Evolution>(sys: &E, s: &State) -> Result<State> {
    s.check_finite()?;
    let d = sys.rhs(&s.to_modes())?;
    Ok(State::from_modes(s.grid(), &d, s.time))
}

pub fn rhs_fifth_order(p: &CaseParams, s: &State) -> Result<State> {
    derivative(&FifthOrder::new(s.grid(), *p)?, s)
}

pub fn rhs_full_dispersion(p: &CaseParams, s: &State, with_surface_tension: bool) -> Result<State> {
    derivative(&FullDispersion::new(s.grid(), *p, with_surface_tension)?, s)
}

pub fn rhs_kaup(p: &CaseParams, s: &State, allow_ill_posed: bool) -> Result<State> {
    derivative(&Kaup::new(s.grid(), *p, allow_ill_posed)?, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_ops::Field;
    use crate::systems::Extended;
    use std::f64::consts::PI;

    fn fifth_params() -> CaseParams {
        let s = 1.0 / 6.0;
        CaseParams::abcd(-s, s, -s, s, 0.1, 0.0).with_ext(Extended {
            a1: Some(0.0),
            b1: Some(0.05),
            c1: Some(0.0),
            d1: Some(0.05),
            beta_fd: 0.0,
        })
    }

    #[test]
    fn rest_states() {
        let g = Grid::new(1, 32, 2.0 * PI).unwrap();
        let rest = State::rest(&g);
        let d = rhs_fifth_order(&fifth_params(), &rest).unwrap();
        assert_eq!(d.eta.max_abs() + d.vel[0].max_abs(), 0.0);
        let p = CaseParams::abcd(0.0, 0.0, 0.0, 0.0, 0.1, 0.0);
        let d = rhs_full_dispersion(&p, &rest, false).unwrap();
        assert_eq!(d.eta.max_abs() + d.vel[0].max_abs(), 0.0);
        let g = Grid::new(1, 16, 2.0 * PI).unwrap();
        let pk = CaseParams::abcd(0.0, 0.0, 0.0, 0.0, 0.01, 0.0);
        let d = rhs_kaup(&pk, &State::rest(&g), false).unwrap();
        assert_eq!(d.eta.max_abs() + d.vel[0].max_abs(), 0.0);
    }

    #[test]
    fn kaup_resolution_gate() {
        let g = Grid::new(1, 64, 2.0 * PI).unwrap();
        let p = CaseParams::abcd(0.0, 0.0, 0.0, 0.0, 0.1, 0.0);
        assert!(matches!(Kaup::new(&g, p, false), Err(Error::IllPosedResolution { .. })));
        assert!(Kaup::new(&g, p, true).is_ok());
    }

    #[test]
    fn fifth_order_rejects_2d() {
        let g = Grid::new(2, 16, 2.0 * PI).unwrap();
        assert!(matches!(FifthOrder::new(&g, fifth_params()), Err(Error::Dimension(_))));
    }

    #[test]
    fn mass_mean_of_eta_t_is_zero() {
        let g = Grid::new(1, 32, 2.0 * PI).unwrap();
        let s = State::new(
            Field::from_fn(&g, |x, _| 0.3 * x.cos() + 0.1 * (2.0 * x).sin()),
            vec![Field::from_fn(&g, |x, _| 0.2 * (x + 0.4).sin())],
            0.0,
        )
        .unwrap();
        let d = rhs_fifth_order(&fifth_params(), &s).unwrap();
        assert!(d.eta.spectrum()[0].norm() < 1e-12);
    }
}
