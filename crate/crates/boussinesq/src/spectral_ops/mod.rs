//! Periodic grids, transforms and Fourier multipliers.

mod field;
mod grid;
mod multiplier;
mod norms;

pub use field::Field;
pub use grid::Grid;
pub use multiplier::{
    apply_multiplier, apply_spectral, bump, helmholtz_inv, hilbert, identity, j_eps, j_eps_inv,
    lambda_s, mollifier, p_eps, r_eps, riesz, t_eps, MultiplierOp,
};
pub use norms::{
    dealias, hs_sq, inner, integral, sobolev_norm, weighted_sq, xsk_norm, xsk_sq,
};
