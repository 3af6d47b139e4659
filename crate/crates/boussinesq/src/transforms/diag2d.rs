use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral_ops::{Field, Grid};
use crate::systems::{
    check_finite_modes, zero_block, Abcd, Block, CaseParams, Evolution, Modes, State, ZERO,
};

/// Which two-dimensional model is diagonalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diag2dCase {
    /// `a = -1`, `b = c = d = 0`.
    ANeg,
    /// `c = -1`, `a = b = d = 0`.
    CNeg,
}

impl Diag2dCase {
    /// Parameters of the underlying `(a,b,c,d)` system.
    pub fn params(&self, eps: f64) -> CaseParams {
        match self {
            Diag2dCase::ANeg => CaseParams::abcd(-1.0, 0.0, 0.0, 0.0, eps, 4.0 / 3.0),
            Diag2dCase::CNeg => CaseParams::abcd(0.0, 0.0, -1.0, 0.0, eps, 4.0 / 3.0),
        }
    }
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Two-dimensional diagonalization with unknowns `(ζ, v₁, v₂)`.
///
/// `ζ` is proportional to the vorticity of `u` and `v₁, v₂` carry the two
/// counter-propagating wave families, with `v₂ = conj(v₁)` for real data.
/// The linear part becomes `diag(0, -i|D|J_ε, i|D|J_ε)`.
#[derive(Debug, Clone)]
pub struct Diag2d {
    grid: Grid,
    case: Diag2dCase,
    orig: Abcd,
    /// Per-mode `(R₁, R₂, J, |ξ|)`.
    sym: Vec<(Complex64, Complex64, f64, f64)>,
}

impl Diag2d {
    pub fn new(grid: &Grid, eps: f64, case: Diag2dCase) -> Result<Diag2d> {
        if grid.dim() != 2 {
            return Err(Error::Dimension("expected a 2D grid".into()));
        }
        if !(eps > 0.0) {
            return Err(Error::Parameter(format!("eps must be positive, got {eps}")));
        }
        let orig = Abcd::new_unchecked(grid, case.params(eps));
        let sym = (0..grid.len())
            .map(|m| {
                let [k1, k2] = grid.xi_odd(m);
                let r = k1.hypot(k2);
                let j = (1.0 + eps * grid.xi2(m)).sqrt();
                if r == 0.0 {
                    (ZERO, ZERO, j, 0.0)
                } else {
                    (I * (k1 / r), I * (k2 / r), j, r)
                }
            })
            .collect();
        Ok(Diag2d { grid: grid.clone(), case, orig, sym })
    }

    pub fn linear_only(mut self) -> Diag2d {
        self.orig = self.orig.linear_only();
        self
    }

    pub fn with_dealias(mut self, on: bool) -> Diag2d {
        self.orig = self.orig.with_dealias(on);
        self
    }

    pub fn case(&self) -> Diag2dCase {
        self.case
    }

    /// `P⁻¹` at mode `m`.
    pub fn p_inv(&self, m: usize) -> Block {
        let (r1, r2, j, _) = self.sym[m];
        let mut b = zero_block();
        match self.case {
            Diag2dCase::ANeg => {
                b[0] = [ZERO, r2 * j, -r1 * j];
                b[1] = [-0.5 * I, -0.5 * r1 * j, -0.5 * r2 * j];
                b[2] = [0.5 * I, -0.5 * r1 * j, -0.5 * r2 * j];
            }
            Diag2dCase::CNeg => {
                b[0] = [ZERO, r2, -r1];
                b[1] = [-0.5 * I * j, -0.5 * r1, -0.5 * r2];
                b[2] = [0.5 * I * j, -0.5 * r1, -0.5 * r2];
            }
        }
        b
    }

    /// `P` at mode `m`.
    pub fn p(&self, m: usize) -> Block {
        let (r1, r2, j, _) = self.sym[m];
        let mut b = zero_block();
        match self.case {
            Diag2dCase::ANeg => {
                b[0] = [ZERO, I, -I];
                b[1] = [-r2 / j, r1 / j, r1 / j];
                b[2] = [r1 / j, r2 / j, r2 / j];
            }
            Diag2dCase::CNeg => {
                b[0] = [ZERO, I / j, -I / j];
                b[1] = [-r2, r1, r1];
                b[2] = [r1, r2, r2];
            }
        }
        b
    }

    /// Apply a per-mode 3×3 map to three spectra.
    pub fn map(&self, f: impl Fn(usize) -> Block, u: &[Vec<Complex64>]) -> Modes {
        let n = self.grid.len();
        let mut out = vec![vec![ZERO; n]; 3];
        for m in 0..n {
            let b = f(m);
            for i in 0..3 {
                out[i][m] = b[i][0] * u[0][m] + b[i][1] * u[1][m] + b[i][2] * u[2][m];
            }
        }
        out
    }

    /// `(η, u₁, u₂)` spectra to `(ζ, v₁, v₂)` spectra.
    pub fn forward(&self, u: &[Vec<Complex64>]) -> Modes {
        self.map(|m| self.p_inv(m), u)
    }

    /// `(ζ, v₁, v₂)` spectra to `(η, u₁, u₂)` spectra.
    pub fn inverse(&self, w: &[Vec<Complex64>]) -> Modes {
        self.map(|m| self.p(m), w)
    }

    /// The `(a,b,c,d)` system this diagonalizes.
    pub fn original(&self) -> &Abcd {
        &self.orig
    }
}

impl Evolution for Diag2d {
    fn grid(&self) -> &Grid {
        &self.grid
    }

    fn ncomp(&self) -> usize {
        3
    }

    fn linear(&self, m: usize) -> Block {
        let (_, _, j, r) = self.sym[m];
        let mut l = zero_block();
        l[1][1] = Complex64::new(0.0, -r * j);
        l[2][2] = Complex64::new(0.0, r * j);
        l
    }

    fn nonlinear(&self, w: &[Vec<Complex64>]) -> Result<Modes> {
        check_finite_modes(w)?;
        // Physical fields are real: drop the round-off imaginary part of P·W.
        let u: Modes = self
            .inverse(w)
            .iter()
            .map(|s| {
                let mut s = s.clone();
                symmetrize(&self.grid, &mut s);
                s
            })
            .collect();
        let n = self.orig.nonlinear(&u)?;
        Ok(self.forward(&n))
    }
}

/// Project a spectrum onto spectra of real fields.
fn symmetrize(grid: &Grid, s: &mut [Complex64]) {
    let orig = s.to_vec();
    for m in 0..s.len() {
        s[m] = 0.5 * (orig[m] + orig[grid.mirror(m)].conj());
    }
}

/// Three fields produced by the two-dimensional diagonalization.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagonal2d {
    pub grid: Grid,
    /// Spectra of `(ζ, v₁, v₂)`.
    pub modes: Modes,
}

impl Diagonal2d {
    /// `ζ` as a real field.
    pub fn zeta(&self) -> Field {
        Field::from_spectrum(&self.grid, &self.modes[0])
    }

    /// Largest point value of `|v_k|`, `k ∈ {1, 2}`.
    pub fn v_sup(&self, k: usize) -> f64 {
        self.grid.complex(&self.modes[k]).iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

pub fn diagonalize_2d(s: &State, eps: f64, case: Diag2dCase) -> Result<Diagonal2d> {
    s.check_finite()?;
    let d = Diag2d::new(s.grid(), eps, case)?;
    Ok(Diagonal2d { grid: s.grid().clone(), modes: d.forward(&s.to_modes()) })
}

pub fn undiagonalize_2d(w: &Diagonal2d, eps: f64, case: Diag2dCase) -> Result<State> {
    let d = Diag2d::new(&w.grid, eps, case)?;
    Ok(State::from_modes(&w.grid, &d.inverse(&w.modes), 0.0))
}
