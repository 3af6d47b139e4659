//! Time integration and the mollifier-regularized construction.

mod integrator;
mod mollified;

pub use integrator::*;
pub use mollified::*;
