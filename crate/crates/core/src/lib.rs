//! Spin-1/2 qubits driven by rotating fields: cyclic-state phases, the
//! geometric gates they realize, and two-loop field designs that cancel the
//! dynamic phase.

pub mod dynamics;
pub mod error;
pub mod formulas;
pub mod gates;
pub mod newton;
pub mod phase;
mod quadrature;
pub mod segment;
pub mod solvers;
pub mod spinor;
pub mod two_qubit;

pub use error::{Error, Result};
