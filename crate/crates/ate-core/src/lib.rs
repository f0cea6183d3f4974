//! Statevector simulation of adiabatic time evolution (ATE) for
//! grid-discretized electron systems in first quantization.
//!
//! The crate provides the pieces needed to reproduce ground-state
//! preparation by Trotterized adiabatic evolution and the hybrid
//! electron/nuclear-register search for optimal molecular structure:
//!
//! * [`grid`] — spatial discretization and register index bookkeeping,
//! * [`statevector`] — the dense amplitude vector and its unitary steps,
//! * [`potentials`] — diagonal potential construction and assembly,
//! * [`spectra`] — the exact-diagonalization oracle and the adiabatic
//!   indicator `f(A)`,
//! * [`scheduling`] — linear and gap-adapted annealing schedules,
//! * [`initial_state`] — uniform, Slater-determinant, and product
//!   initial states,
//! * [`driver`] — the Trotterized evolution loop and infidelity sweeps,
//! * [`structopt`] — nuclear configuration tables and structure-search
//!   specific operators.
//!
//! All quantities are in Hartree atomic units.

pub mod driver;
pub mod error;
pub mod grid;
pub mod initial_state;
pub mod potentials;
pub mod scheduling;
pub mod spectra;
pub mod statevector;
pub mod structopt;

pub use error::{Error, Result};
pub use grid::{GridSpec, RegisterLayout};
pub use statevector::StateVector;
