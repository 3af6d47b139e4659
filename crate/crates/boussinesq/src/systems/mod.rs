//! Case registry, states and right-hand sides of the evolution systems.
//!
//! Every system is split as `U_t = L U + N(U)` where `L` is a constant
//! coefficient multiplier matrix (at most 3×3 per mode) and `N` collects the
//! remaining terms. Integrators rely on that split for exact linear
//! propagation.

mod abcd;
mod extended;
mod params;
mod state;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral_ops::Grid;

pub use abcd::{rhs_abcd_1d, rhs_abcd_2d, rhs_bathymetry, Abcd, BathymetryProfile};
pub use extended::{
    rhs_fifth_order, rhs_full_dispersion, rhs_kaup, FifthOrder, FullDispersion, Kaup,
};
pub use params::{canonical_params, registry_case, validate_params, CaseId, CaseParams, Extended};
pub use state::State;

/// One spectrum per unknown.
pub type Modes = Vec<Vec<Complex64>>;

/// Per-mode linear coupling; only the leading `ncomp × ncomp` block is used.
pub type Block = [[Complex64; 3]; 3];

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn zero_block() -> Block {
    [[ZERO; 3]; 3]
}

/// A semi-discrete evolution system `U_t = L U + N(U)` on a fixed grid.
pub trait Evolution: Send + Sync {
    fn grid(&self) -> &Grid;

    /// Number of unknowns.
    fn ncomp(&self) -> usize;

    /// Linear coupling at flattened mode `m`.
    fn linear(&self, m: usize) -> Block;

    /// Everything that is not in [`Evolution::linear`].
    fn nonlinear(&self, u: &[Vec<Complex64>]) -> Result<Modes>;

    fn rhs(&self, u: &[Vec<Complex64>]) -> Result<Modes> {
        let mut out = self.nonlinear(u)?;
        apply_linear(self, u, &mut out);
        Ok(out)
    }
}

/// `out += L u`.
pub fn apply_linear<E: Evolution + ?Sized>(sys: &E, u: &[Vec<Complex64>], out: &mut Modes) {
    let nc = sys.ncomp();
    for m in 0..sys.grid().len() {
        let l = sys.linear(m);
        for i in 0..nc {
            let mut acc = ZERO;
            for j in 0..nc {
                acc += l[i][j] * u[j][m];
            }
            out[i][m] += acc;
        }
    }
}

/// Linear part alone.
pub fn linear_rhs<E: Evolution + ?Sized>(sys: &E, u: &[Vec<Complex64>]) -> Modes {
    let mut out = vec![vec![ZERO; sys.grid().len()]; sys.ncomp()];
    apply_linear(sys, u, &mut out);
    out
}

/// Spectral helpers shared by the right-hand sides.
pub(crate) struct Kit<'a> {
    pub grid: &'a Grid,
    pub dealias: bool,
}

impl<'a> Kit<'a> {
    pub fn new(grid: &'a Grid, dealias: bool) -> Kit<'a> {
        Kit { grid, dealias }
    }

    pub fn real(&self, spec: &[Complex64]) -> Vec<f64> {
        self.grid.real(spec)
    }

    /// Spectrum of a real-space array, truncated when dealiasing is on.
    pub fn project(&self, values: &[f64]) -> Vec<Complex64> {
        let mut s = self.grid.fft(values);
        if self.dealias {
            self.grid.dealias(&mut s);
        }
        s
    }

    /// Spectrum of the pointwise product `a * b`.
    pub fn product(&self, a: &[f64], b: &[f64]) -> Vec<Complex64> {
        let p: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
        self.project(&p)
    }

    pub fn diff(&self, spec: &[Complex64], axis: usize) -> Vec<Complex64> {
        self.grid.diff(spec, axis)
    }

    /// Divergence of a vector of spectra.
    pub fn div(&self, comps: &[Vec<Complex64>]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.grid.len()];
        for (axis, c) in comps.iter().enumerate() {
            for (m, z) in c.iter().enumerate() {
                out[m] += z * Complex64::new(0.0, self.grid.xi_odd(m)[axis]);
            }
        }
        out
    }

    /// Multiply a spectrum mode-wise by a real table.
    pub fn scale(&self, spec: &mut [Complex64], table: &[f64]) {
        for (z, t) in spec.iter_mut().zip(table) {
            *z *= *t;
        }
    }
}

/// Table of `f(|ξ|²)` on every mode.
pub(crate) fn radial_table(grid: &Grid, f: impl Fn(f64) -> f64) -> Vec<f64> {
    (0..grid.len()).map(|m| f(grid.xi2(m))).collect()
}

pub(crate) fn check_finite_modes(u: &[Vec<Complex64>]) -> Result<()> {
    if u.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidField("non-finite state".into()))
    }
}

/// Linear block of an η–velocity system with `η_t = -p iξ·u`, `u_t = -q iξ η`.
pub(crate) fn wave_block(grid: &Grid, m: usize, p: f64, q: f64) -> Block {
    let mut l = zero_block();
    let xi = grid.xi_odd(m);
    for axis in 0..grid.dim() {
        l[0][1 + axis] = Complex64::new(0.0, -p * xi[axis]);
        l[1 + axis][0] = Complex64::new(0.0, -q * xi[axis]);
    }
    l
}
