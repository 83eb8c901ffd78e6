//! Two nonconservative systems coupled at `x = 0` through path-conservative
//! Kirchhoff conditions on the relaxation system.

mod domain;
mod inflow;
mod solver;

pub use domain::{CoupledDomain, CoupledRun, ScanPoint};
pub use inflow::{blood_inflow, PulseInflow};
pub use solver::{CouplingCondition, InterfaceData, InterfaceTerms, NewtonOptions, RiemannSolverKind};
