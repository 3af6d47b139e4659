use num_complex::Complex64;

use super::{
    check_finite_modes, radial_table, validate_params, wave_block, Block, CaseId, CaseParams,
    Evolution, Kit, Modes, State,
};
use crate::error::{Error, Result};
use crate::spectral_ops::{Field, Grid};

/// Bottom topography entering the transport flux as `(η - β) u`.
#[derive(Debug, Clone, PartialEq)]
pub struct BathymetryProfile {
    pub beta: Field,
}

impl BathymetryProfile {
    pub fn new(beta: Field) -> Result<BathymetryProfile> {
        beta.check_finite()?;
        Ok(BathymetryProfile { beta })
    }

    pub fn sup_norm(&self) -> f64 {
        self.beta.max_abs()
    }
}

/// The `(a,b,c,d)` system
///
/// ```text
/// η_t + ∇·u + ε[∇·(ηu) + a∇·Δu − bΔη_t] = 0
/// u_t + ∇η + ε[½∇|u|² + c∇Δη − dΔu_t] = 0
/// ```
///
/// in one or two dimensions, optionally over a bathymetry.
#[derive(Debug, Clone)]
pub struct Abcd {
    grid: Grid,
    params: CaseParams,
    nonlinear: bool,
    dealias: bool,
    beta: Option<Vec<f64>>,
    /// `(1 - aε|ξ|²) / (1 + bε|ξ|²)`
    p: Vec<f64>,
    /// `(1 - cε|ξ|²) / (1 + dε|ξ|²)`
    q: Vec<f64>,
    mass_b: Vec<f64>,
    mass_d: Vec<f64>,
}

impl Abcd {
    /// Build the system after validating `params`.
    pub fn new(grid: &Grid, params: CaseParams) -> Result<Abcd> {
        let params = validate_params(params)?;
        Ok(Abcd::new_unchecked(grid, params))
    }

    /// Build without registry validation (used by changes of unknowns that
    /// probe parameter sets outside the constraint surface).
    pub fn new_unchecked(grid: &Grid, params: CaseParams) -> Abcd {
        let e = params.eps;
        let mass_b = radial_table(grid, |k2| 1.0 / (1.0 + params.b * e * k2));
        let mass_d = radial_table(grid, |k2| 1.0 / (1.0 + params.d * e * k2));
        let p = radial_table(grid, |k2| (1.0 - params.a * e * k2) / (1.0 + params.b * e * k2));
        let q = radial_table(grid, |k2| (1.0 - params.c * e * k2) / (1.0 + params.d * e * k2));
        Abcd { grid: grid.clone(), params, nonlinear: true, dealias: true, beta: None, p, q, mass_b, mass_d }
    }

    /// Drop every `ε`-weighted transport term.
    pub fn linear_only(mut self) -> Abcd {
        self.nonlinear = false;
        self
    }

    pub fn with_dealias(mut self, on: bool) -> Abcd {
        self.dealias = on;
        self
    }

    pub fn with_bathymetry(mut self, profile: &BathymetryProfile) -> Result<Abcd> {
        if profile.beta.grid() != &self.grid {
            return Err(Error::GridMismatch("bathymetry profile grid differs".into()));
        }
        self.beta = Some(profile.beta.values().to_vec());
        Ok(self)
    }

    pub fn params(&self) -> &CaseParams {
        &self.params
    }
}

impl Evolution for Abcd {
    fn grid(&self) -> &Grid {
        &self.grid
    }

    fn ncomp(&self) -> usize {
        1 + self.grid.dim()
    }

    fn linear(&self, m: usize) -> Block {
        wave_block(&self.grid, m, self.p[m], self.q[m])
    }

    fn nonlinear(&self, u: &[Vec<Complex64>]) -> Result<Modes> {
        check_finite_modes(u)?;
        let n = self.grid.len();
        let dim = self.grid.dim();
        let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; 1 + dim];
        if !self.nonlinear {
            return Ok(out);
        }
        let kit = Kit::new(&self.grid, self.dealias);
        let eps = self.params.eps;
        let mut depth = kit.real(&u[0]);
        if let Some(beta) = &self.beta {
            for (h, b) in depth.iter_mut().zip(beta) {
                *h -= b;
            }
        }
        let vel: Vec<Vec<f64>> = u[1..].iter().map(|s| kit.real(s)).collect();
        let flux: Vec<Vec<Complex64>> = vel.iter().map(|v| kit.product(&depth, v)).collect();
        let mut eta_t = kit.div(&flux);
        kit.scale(&mut eta_t, &self.mass_b);
        for (o, z) in out[0].iter_mut().zip(&eta_t) {
            *o = -eps * z;
        }
        let half_sq: Vec<f64> = (0..n).map(|i| 0.5 * vel.iter().map(|v| v[i] * v[i]).sum::<f64>()).collect();
        let ke = kit.project(&half_sq);
        for axis in 0..dim {
            let mut g = kit.diff(&ke, axis);
            kit.scale(&mut g, &self.mass_d);
            for (o, z) in out[1 + axis].iter_mut().zip(&g) {
                *o = -eps * z;
            }
        }
        Ok(out)
    }
}

fn derivative(sys: &Abcd, s: &State) -> Result<State> {
    s.check_finite()?;
    let d = sys.rhs(&s.to_modes())?;
    Ok(State::from_modes(s.grid(), &d, s.time))
}

fn require_dim(s: &State, dim: usize) -> Result<()> {
    if s.grid().dim() != dim {
        return Err(Error::Dimension(format!("expected a {dim}D state, got {}D", s.grid().dim())));
    }
    Ok(())
}

/// Time derivative `(η_t, u_t)` of the one-dimensional system.
pub fn rhs_abcd_1d(p: &CaseParams, s: &State) -> Result<State> {
    require_dim(s, 1)?;
    derivative(&Abcd::new(s.grid(), *p)?, s)
}

/// Time derivative `(η_t, u₁_t, u₂_t)` of the two-dimensional system.
pub fn rhs_abcd_2d(p: &CaseParams, s: &State) -> Result<State> {
    require_dim(s, 2)?;
    derivative(&Abcd::new(s.grid(), *p)?, s)
}

/// Time derivative with the transport flux `∇·((η - β)u)`.
pub fn rhs_bathymetry(p: &CaseParams, beta: &BathymetryProfile, s: &State) -> Result<State> {
    let sys = Abcd::new(s.grid(), p.with_kind(CaseId::Bathymetry))?.with_bathymetry(beta)?;
    derivative(&sys, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> Grid {
        Grid::new(1, 32, 2.0 * PI).unwrap()
    }

    #[test]
    fn wave_system_on_one_mode() {
        let g = grid();
        // a = b = c = d = 0 only satisfies the constraint with tau = 1/3.
        let p = CaseParams::abcd(0.0, 0.0, 0.0, 0.0, 0.1, 1.0 / 3.0);
        let sys = Abcd::new_unchecked(&g, p).linear_only();
        let s = State::new(Field::from_fn(&g, |x, _| x.cos()), vec![Field::zeros(&g)], 0.0).unwrap();
        let d = State::from_modes(&g, &sys.rhs(&s.to_modes()).unwrap(), 0.0);
        assert!(d.eta.max_abs() < 1e-14);
        assert!(d.vel[0].sup_dist(&Field::from_fn(&g, |x, _| x.sin())) < 1e-13);
    }

    #[test]
    fn rest_state_is_fixed() {
        let g = grid();
        let p = CaseParams::abcd(0.0, 1.0 / 3.0, 0.0, 0.0, 0.1, 0.0);
        let d = rhs_abcd_1d(&p, &State::rest(&g)).unwrap();
        assert_eq!(d.eta.max_abs(), 0.0);
        assert_eq!(d.vel[0].max_abs(), 0.0);
    }

    #[test]
    fn dimension_and_bathymetry_checks() {
        let g2 = Grid::new(2, 16, 2.0 * PI).unwrap();
        let p = CaseParams::abcd(0.0, 1.0 / 3.0, 0.0, 0.0, 0.1, 0.0);
        assert!(matches!(rhs_abcd_1d(&p, &State::rest(&g2)), Err(Error::Dimension(_))));
        let beta = BathymetryProfile::new(Field::zeros(&g2)).unwrap();
        assert!(matches!(rhs_bathymetry(&p, &beta, &State::rest(&grid())), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn flux_vanishes_when_eta_equals_beta() {
        let g = grid();
        let p = CaseParams::abcd(0.0, 1.0 / 3.0, 0.0, 0.0, 0.1, 0.0);
        let beta = BathymetryProfile::new(Field::from_fn(&g, |x, _| 0.2 * x.cos())).unwrap();
        let s = State::new(beta.beta.clone(), vec![Field::from_fn(&g, |x, _| x.sin())], 0.0).unwrap();
        let sys = Abcd::new(&g, p).unwrap().with_bathymetry(&beta).unwrap();
        let n = sys.nonlinear(&s.to_modes()).unwrap();
        assert!(n[0].iter().all(|z| z.norm() < 1e-12));
    }
}
