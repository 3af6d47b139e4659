//! Changes of unknowns: diagonalizations, the `(η, v)` reduction, the
//! `η̃ = J_ε²η` reduction and curl-free projection.

mod calc;
mod diag1d;
mod diag2d;
mod eta_v;
mod projection;
mod quasilinear;
mod tilde;

pub use diag1d::{
    diagonalize_a_neg_1d, diagonalize_c_neg_1d, rhs_diag_a_neg_1d, rhs_diag_c_neg_1d,
    undiagonalize_a_neg_1d, undiagonalize_c_neg_1d, Diag1d, Diag1dCase,
};
pub use diag2d::{diagonalize_2d, undiagonalize_2d, Diag2d, Diag2dCase, Diagonal2d};
pub use eta_v::{from_v_variable, rhs_eta_v_1d, rhs_eta_v_2d, to_v_variable, EtaV};
pub use projection::{curl, curl_free_projection};
pub use quasilinear::{
    quasilinear_residual, regularity_transfer_check, Bundle, QuasilinearResidual, TransferReport,
};
pub use tilde::{
    rhs_tilde_eta, tilde_eta_inverse, tilde_eta_transform, tilde_leading_params, tilde_remainder,
};

pub(crate) use calc::{depth, Calc};
