use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral_ops::{Field, Grid};
use crate::systems::{
    check_finite_modes, radial_table, zero_block, Block, Evolution, Kit, Modes, State,
};

/// Which one-dimensional model is diagonalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diag1dCase {
    /// `a = -1`, `b = c = d = 0`: `P⁻¹ = ½[[1, J],[1, -J]]`.
    ANeg,
    /// `c = -1`, `a = b = d = 0`: `P⁻¹ = ½[[J, 1],[-J, 1]]`.
    CNeg,
}

/// Diagonalized one-dimensional system in the unknowns `(ζ, v)`:
/// `ζ_t + Jζ_x + (ε/2)N₁ = 0`, `v_t - Jv_x + (ε/2)N₂ = 0`.
#[derive(Debug, Clone)]
pub struct Diag1d {
    grid: Grid,
    case: Diag1dCase,
    eps: f64,
    dealias: bool,
    nonlinear: bool,
    j: Vec<f64>,
    jinv: Vec<f64>,
}

impl Diag1d {
    pub fn new(grid: &Grid, eps: f64, case: Diag1dCase) -> Result<Diag1d> {
        if grid.dim() != 1 {
            return Err(Error::Dimension("expected a 1D grid".into()));
        }
        if !(eps > 0.0) {
            return Err(Error::Parameter(format!("eps must be positive, got {eps}")));
        }
        Ok(Diag1d {
            grid: grid.clone(),
            case,
            eps,
            dealias: true,
            nonlinear: true,
            j: radial_table(grid, |k2| (1.0 + eps * k2).sqrt()),
            jinv: radial_table(grid, |k2| 1.0 / (1.0 + eps * k2).sqrt()),
        })
    }

    pub fn linear_only(mut self) -> Diag1d {
        self.nonlinear = false;
        self
    }

    pub fn with_dealias(mut self, on: bool) -> Diag1d {
        self.dealias = on;
        self
    }

    /// `(η, u)` spectra to `(ζ, v)` spectra.
    pub fn forward(&self, eta: &[Complex64], u: &[Complex64]) -> Modes {
        let n = self.grid.len();
        let mut z = vec![Complex64::new(0.0, 0.0); n];
        let mut v = z.clone();
        for m in 0..n {
            let j = self.j[m];
            match self.case {
                Diag1dCase::ANeg => {
                    z[m] = 0.5 * (eta[m] + j * u[m]);
                    v[m] = 0.5 * (eta[m] - j * u[m]);
                }
                Diag1dCase::CNeg => {
                    z[m] = 0.5 * (j * eta[m] + u[m]);
                    v[m] = 0.5 * (-j * eta[m] + u[m]);
                }
            }
        }
        vec![z, v]
    }

    /// `(ζ, v)` spectra to `(η, u)` spectra.
    pub fn inverse(&self, zeta: &[Complex64], v: &[Complex64]) -> Modes {
        let n = self.grid.len();
        let mut eta = vec![Complex64::new(0.0, 0.0); n];
        let mut u = eta.clone();
        for m in 0..n {
            let ji = self.jinv[m];
            match self.case {
                Diag1dCase::ANeg => {
                    eta[m] = zeta[m] + v[m];
                    u[m] = ji * (zeta[m] - v[m]);
                }
                Diag1dCase::CNeg => {
                    eta[m] = ji * (zeta[m] - v[m]);
                    u[m] = zeta[m] + v[m];
                }
            }
        }
        vec![eta, u]
    }
}

impl Evolution for Diag1d {
    fn grid(&self) -> &Grid {
        &self.grid
    }

    fn ncomp(&self) -> usize {
        2
    }

    fn linear(&self, m: usize) -> Block {
        let w = self.grid.xi_odd(m)[0] * self.j[m];
        let mut l = zero_block();
        l[0][0] = Complex64::new(0.0, -w);
        l[1][1] = Complex64::new(0.0, w);
        l
    }

    fn nonlinear(&self, u: &[Vec<Complex64>]) -> Result<Modes> {
        check_finite_modes(u)?;
        let n = self.grid.len();
        if !self.nonlinear {
            return Ok(vec![vec![Complex64::new(0.0, 0.0); n]; 2]);
        }
        let k = Kit::new(&self.grid, self.dealias);
        let sum: Vec<Complex64> = u[0].iter().zip(&u[1]).map(|(a, b)| a + b).collect();
        let dif: Vec<Complex64> = u[0].iter().zip(&u[1]).map(|(a, b)| a - b).collect();
        let mut jd = dif.clone();
        k.scale(&mut jd, &self.jinv);
        let (first, second) = match self.case {
            Diag1dCase::ANeg => {
                // ∂x[(ζ+v) J⁻¹(ζ-v)] and J[J⁻¹(ζ-v) · J⁻¹(ζ_x-v_x)]
                let a = k.diff(&k.product(&k.real(&sum), &k.real(&jd)), 0);
                let mut b = k.product(&k.real(&jd), &k.real(&k.diff(&jd, 0)));
                k.scale(&mut b, &self.j);
                (a, b)
            }
            Diag1dCase::CNeg => {
                // ∂xJ[(ζ+v) J⁻¹(ζ-v)] and (ζ+v)(ζ+v)_x
                let mut a = k.diff(&k.product(&k.real(&sum), &k.real(&jd)), 0);
                k.scale(&mut a, &self.j);
                let b = k.product(&k.real(&sum), &k.real(&k.diff(&sum, 0)));
                (a, b)
            }
        };
        let h = -0.5 * self.eps;
        let (n1, n2): (Vec<Complex64>, Vec<Complex64>) = match self.case {
            Diag1dCase::ANeg => (
                first.iter().zip(&second).map(|(a, b)| h * (a + b)).collect(),
                first.iter().zip(&second).map(|(a, b)| h * (a - b)).collect(),
            ),
            Diag1dCase::CNeg => (
                first.iter().zip(&second).map(|(a, b)| h * (a + b)).collect(),
                first.iter().zip(&second).map(|(a, b)| h * (b - a)).collect(),
            ),
        };
        Ok(vec![n1, n2])
    }
}

fn forward_fields(s: &State, eps: f64, case: Diag1dCase) -> Result<(Field, Field)> {
    s.check_finite()?;
    let d = Diag1d::new(s.grid(), eps, case)?;
    let w = d.forward(&s.eta.spectrum(), &s.vel[0].spectrum());
    Ok((Field::from_spectrum(s.grid(), &w[0]), Field::from_spectrum(s.grid(), &w[1])))
}

fn inverse_fields(zeta: &Field, v: &Field, eps: f64, case: Diag1dCase) -> Result<State> {
    let d = Diag1d::new(zeta.grid(), eps, case)?;
    let u = d.inverse(&zeta.spectrum(), &v.spectrum());
    State::new(Field::from_spectrum(zeta.grid(), &u[0]), vec![Field::from_spectrum(zeta.grid(), &u[1])], 0.0)
}

fn rhs_fields(zeta: &Field, v: &Field, eps: f64, case: Diag1dCase) -> Result<(Field, Field)> {
    if zeta.grid() != v.grid() {
        return Err(Error::GridMismatch("zeta and v grids differ".into()));
    }
    let d = Diag1d::new(zeta.grid(), eps, case)?;
    let r = d.rhs(&[zeta.spectrum(), v.spectrum()])?;
    Ok((Field::from_spectrum(zeta.grid(), &r[0]), Field::from_spectrum(zeta.grid(), &r[1])))
}

/// `W = P⁻¹U` for the `a = -1` model.
pub fn diagonalize_a_neg_1d(s: &State, eps: f64) -> Result<(Field, Field)> {
    forward_fields(s, eps, Diag1dCase::ANeg)
}

/// `U = PW` for the `a = -1` model.
pub fn undiagonalize_a_neg_1d(zeta: &Field, v: &Field, eps: f64) -> Result<State> {
    inverse_fields(zeta, v, eps, Diag1dCase::ANeg)
}

pub fn rhs_diag_a_neg_1d(zeta: &Field, v: &Field, eps: f64) -> Result<(Field, Field)> {
    rhs_fields(zeta, v, eps, Diag1dCase::ANeg)
}

/// `W = P⁻¹U` for the `c = -1` model.
pub fn diagonalize_c_neg_1d(s: &State, eps: f64) -> Result<(Field, Field)> {
    forward_fields(s, eps, Diag1dCase::CNeg)
}

pub fn undiagonalize_c_neg_1d(zeta: &Field, v: &Field, eps: f64) -> Result<State> {
    inverse_fields(zeta, v, eps, Diag1dCase::CNeg)
}

pub fn rhs_diag_c_neg_1d(zeta: &Field, v: &Field, eps: f64) -> Result<(Field, Field)> {
    rhs_fields(zeta, v, eps, Diag1dCase::CNeg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> Grid {
        Grid::new(1, 32, 2.0 * PI).unwrap()
    }

    #[test]
    fn read_off_rows() {
        let g = grid();
        let c = Field::from_fn(&g, |x, _| x.cos());
        let s = State::new(c.clone(), vec![Field::zeros(&g)], 0.0).unwrap();
        let (z, v) = diagonalize_a_neg_1d(&s, 0.3).unwrap();
        assert!(z.sup_dist(&c.map(|x| 0.5 * x)) < 1e-14);
        assert!(v.sup_dist(&c.map(|x| 0.5 * x)) < 1e-14);

        let s = State::new(Field::zeros(&g), vec![c.clone()], 0.0).unwrap();
        let (z, v) = diagonalize_a_neg_1d(&s, 1.0).unwrap();
        let h = 0.5 * 2f64.sqrt();
        assert!(z.sup_dist(&c.map(|x| h * x)) < 1e-14);
        assert!(v.sup_dist(&c.map(|x| -h * x)) < 1e-14);

        let s = State::new(c.clone(), vec![Field::zeros(&g)], 0.0).unwrap();
        let (z, v) = diagonalize_c_neg_1d(&s, 1.0).unwrap();
        assert!(z.sup_dist(&c.map(|x| h * x)) < 1e-14);
        assert!(v.sup_dist(&c.map(|x| -h * x)) < 1e-14);
    }

    #[test]
    fn zero_state_has_zero_rhs() {
        let g = grid();
        let z = Field::zeros(&g);
        let (a, b) = rhs_diag_a_neg_1d(&z, &z, 0.1).unwrap();
        assert_eq!(a.max_abs() + b.max_abs(), 0.0);
        let (a, b) = rhs_diag_c_neg_1d(&z, &z, 0.1).unwrap();
        assert_eq!(a.max_abs() + b.max_abs(), 0.0);
    }

    #[test]
    fn round_trip() {
        let g = grid();
        let s = State::new(
            Field::from_fn(&g, |x, _| (2.0 * x).sin() + 0.3 * (5.0 * x).cos()),
            vec![Field::from_fn(&g, |x, _| 0.7 * (3.0 * x).cos())],
            0.0,
        )
        .unwrap();
        for case in [Diag1dCase::ANeg, Diag1dCase::CNeg] {
            let (z, v) = forward_fields(&s, 0.2, case).unwrap();
            let back = inverse_fields(&z, &v, 0.2, case).unwrap();
            assert!(back.sup_dist(&s) < 1e-13);
        }
    }

    #[test]
    fn wrong_dimension() {
        let g = Grid::new(2, 16, 1.0).unwrap();
        assert!(matches!(Diag1d::new(&g, 0.1, Diag1dCase::ANeg), Err(Error::Dimension(_))));
    }
}
