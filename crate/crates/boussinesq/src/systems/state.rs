use num_complex::Complex64;

use super::Modes;
use crate::error::{Error, Result};
use crate::spectral_ops::{Field, Grid};

/// Surface elevation paired with a velocity-like unknown (`u` or `v`).
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub eta: Field,
    pub vel: Vec<Field>,
    pub time: f64,
}

impl State {
    pub fn new(eta: Field, vel: Vec<Field>, time: f64) -> Result<State> {
        let grid = eta.grid();
        if vel.len() != grid.dim() {
            return Err(Error::Dimension(format!(
                "{}D grid needs {} velocity components, got {}",
                grid.dim(),
                grid.dim(),
                vel.len()
            )));
        }
        if vel.iter().any(|v| v.grid() != grid) {
            return Err(Error::GridMismatch("velocity and elevation grids differ".into()));
        }
        Ok(State { eta, vel, time })
    }

    pub fn rest(grid: &Grid) -> State {
        State {
            eta: Field::zeros(grid),
            vel: (0..grid.dim()).map(|_| Field::zeros(grid)).collect(),
            time: 0.0,
        }
    }

    pub fn grid(&self) -> &Grid {
        self.eta.grid()
    }

    pub fn is_finite(&self) -> bool {
        self.eta.is_finite() && self.vel.iter().all(Field::is_finite)
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidField("non-finite state".into()))
        }
    }

    pub fn to_modes(&self) -> Modes {
        let mut out = vec![self.eta.spectrum()];
        out.extend(self.vel.iter().map(Field::spectrum));
        out
    }

    /// Rebuild from spectra, keeping real parts.
    pub fn from_modes(grid: &Grid, modes: &[Vec<Complex64>], time: f64) -> State {
        State {
            eta: Field::from_spectrum(grid, &modes[0]),
            vel: modes[1..].iter().map(|s| Field::from_spectrum(grid, s)).collect(),
            time,
        }
    }

    /// Largest pointwise difference over all unknowns.
    pub fn sup_dist(&self, other: &State) -> f64 {
        self.vel
            .iter()
            .zip(&other.vel)
            .fold(self.eta.sup_dist(&other.eta), |m, (a, b)| m.max(a.sup_dist(b)))
    }
}
