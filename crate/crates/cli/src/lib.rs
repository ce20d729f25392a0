//! Command-line workbench for geometric-phase gates: phase reports, figure
//! datasets, invariant suites and two-loop solver sweeps.

pub mod app;
pub mod config;
pub mod figures;
pub mod table;
pub mod verify;
