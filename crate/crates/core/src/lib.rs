//! Path-conservative relaxation schemes for one-dimensional nonconservative
//! hyperbolic systems `∂ₜU + A(U)∂ₓU = 0`.
//!
//! The crate is organised bottom-up:
//!
//! * [`quadrature`], [`paths`], [`grid`]: the numerical substrate (Gauss–Lobatto
//!   rules, families of paths and their line integrals, uniform grids).
//! * [`models`]: the [`SystemModel`] interface, the two-layer shallow water
//!   system, the 1D blood-vessel model and consistency diagnostics.
//! * [`schemes`]: the IMEX relaxation scheme, its relaxed (ε → 0) limit,
//!   source splitting and boundary ghosts for a single domain.
//! * [`coupling`]: two systems coupled at a static interface through a
//!   path-conservative Kirchhoff Riemann solver.
//! * [`experiments`]: benchmark presets, L¹ errors, EOC tables and CSV output
//!   used by the `ncrelax` binary.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coupling;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod models;
pub mod paths;
pub mod quadrature;
pub mod schemes;

pub use error::{Error, Result};
pub use grid::{Grid1D, GridSolution};
pub use models::{BloodVessel, LinearModel, SystemModel, TwoLayerSwe};
pub use paths::{path_integral, PathFamily, PathIntegrator, Reversed, SegmentPath};
pub use quadrature::{gauss_lobatto, gauss_lobatto_5, Quadrature};

/// State vector with `M` components.
pub type State<const M: usize> = nalgebra::SVector<f64, M>;

/// Dense `M × M` system matrix.
pub type Matrix<const M: usize> = nalgebra::SMatrix<f64, M, M>;
