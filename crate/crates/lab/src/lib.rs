//! Configuration-driven runs, sweeps and acceptance checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod cli;
pub mod config;
pub mod data;
pub mod error;
pub mod output;
pub mod run;
pub mod sweep;

pub use error::{LabError, LabResult};
