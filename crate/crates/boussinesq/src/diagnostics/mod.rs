//! Conserved quantities, energy functionals and blow-up monitoring.

mod energy;
mod monitor;

pub use energy::{
    check_noncavitation, energy_quasilinear, energy_symmetrized, hamiltonian, mass,
};
pub use monitor::{
    blowup_monitor, BlowupMonitor, BlowupReason, EnergyReport, Verdict, DEFAULT_GROWTH_FACTOR,
};
