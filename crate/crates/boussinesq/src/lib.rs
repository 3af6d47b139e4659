//! Pseudospectral laboratory for Boussinesq-type water-wave systems.
//!
//! The crate is organised in layers:
//!
//! - [`spectral_ops`]: periodic grids, transforms and Fourier multipliers
//! - [`systems`]: the case registry and right-hand sides of every evolution system
//! - [`transforms`]: diagonalizations and changes of unknowns
//! - [`diagnostics`]: Hamiltonians, energy functionals and monitors
//! - [`solvers`]: integrating-factor RK4 and the mollified construction
//!
//! ```
//! use boussinesq::spectral_ops::{apply_multiplier, j_eps, Field, Grid};
//!
//! let grid = Grid::new(1, 32, 2.0 * std::f64::consts::PI).unwrap();
//! let f = Field::from_fn(&grid, |x, _| x.cos());
//! let g = apply_multiplier(&j_eps(1.0).unwrap(), &f).unwrap();
//! assert!((g.values()[0] - 2f64.sqrt()).abs() < 1e-12);
//! ```
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
mod error;
pub mod solvers;
pub mod spectral_ops;
pub mod systems;
pub mod transforms;

pub use error::{Error, Result};
pub use num_complex::Complex64;
