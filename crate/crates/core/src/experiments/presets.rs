use std::sync::Arc;

use nalgebra::vector;

use crate::coupling::{CoupledDomain, PulseInflow, RiemannSolverKind};
use crate::error::{Error, Result};
use crate::grid::{Grid1D, GridSolution};
use crate::models::{BloodVessel, TwoLayerSwe};
use crate::paths::PathIntegrator;
use crate::schemes::{BoundaryKind, BoundarySpec, Domain, RelaxationParams};
use crate::State;

use super::config::{CouplingChoice, Preset, RunConfig};

/// `h₂ = 0.2 + 1.6/(1 + e^{−5x})`, `h₁ = 2 − h₂`, both layers at rest.
pub fn swe_smooth_state(x: f64) -> State<4> {
    let h2 = 0.2 + 1.6 / (1.0 + (-5.0 * x).exp());
    vector![2.0 - h2, 0.0, h2, 0.0]
}

/// Internal dam break: light layer thin on the left, thick on the right.
pub fn swe_dambreak_state(x: f64) -> State<4> {
    if x < 0.0 {
        vector![0.2, 0.0, 1.8, 0.0]
    } else {
        vector![1.8, 0.0, 0.2, 0.0]
    }
}

/// Initial data of a single-domain preset on `n_cells` cells.
pub fn swe_initial(cfg: &RunConfig, n_cells: usize) -> Result<GridSolution<4>> {
    let grid = Grid1D::over(cfg.x_min, cfg.x_max, n_cells)?;
    match cfg.preset {
        Preset::SweSmooth => Ok(GridSolution::from_fn(grid, swe_smooth_state)),
        Preset::SweDambreak => Ok(GridSolution::from_fn(grid, swe_dambreak_state)),
        Preset::Custom => Ok(riemann_data(grid, &cfg.left_state, &cfg.right_state)),
        Preset::BloodCoupled => Err(Error::Config("blood-coupled is not a shallow water preset".into())),
    }
}

/// Piecewise constant data with the jump at `x = 0`.
pub fn riemann_data<const M: usize>(grid: Grid1D, left: &[f64], right: &[f64]) -> GridSolution<M> {
    let (l, r) = (
        State::<M>::from_column_slice(left),
        State::<M>::from_column_slice(right),
    );
    GridSolution::from_fn(grid, |x| if x < 0.0 { l } else { r })
}

/// Two-layer shallow water on the configured interval with Neumann ends.
pub fn swe_domain(cfg: &RunConfig) -> Result<Domain<4, TwoLayerSwe>> {
    let mut params = RelaxationParams::with_mu(cfg.mu_left, cfg.cfl)?;
    if let Some(e) = cfg.epsilon {
        params = params.with_epsilon(e)?;
    }
    Domain::new(TwoLayerSwe::default(), params, BoundarySpec::neumann())
}

/// Vessel of the `custom` blood model (wall data of the left vessel).
pub fn blood_domain(cfg: &RunConfig) -> Result<Domain<2, BloodVessel>> {
    let v = BloodVessel::from_wall(cfg.alpha, cfg.young_left, cfg.thickness, cfg.a0)?;
    let mut params = RelaxationParams::with_mu(cfg.mu_left, cfg.cfl)?;
    if let Some(e) = cfg.epsilon {
        params = params.with_epsilon(e)?;
    }
    Ok(Domain::new(v, params, BoundarySpec::neumann())?.with_paths(blood_paths(cfg)))
}

fn blood_paths(cfg: &RunConfig) -> PathIntegrator<2> {
    PathIntegrator::segment().with_closed_form(cfg.closed_form_paths)
}

pub type BloodPair = CoupledDomain<2, BloodVessel, BloodVessel>;

/// Stiff vessel on `(−L, 0)` driven by the pressure pulse, soft vessel on
/// `(0, L)` with a Neumann end, both at rest `(a₀, 0)` initially.
pub fn blood_coupled(cfg: &RunConfig, n_cells: usize) -> Result<(BloodPair, GridSolution<2>, GridSolution<2>)> {
    let v1 = BloodVessel::from_wall(cfg.alpha, cfg.young_left, cfg.thickness, cfg.a0)?;
    let v2 = BloodVessel::from_wall(cfg.alpha, cfg.young_right, cfg.thickness, cfg.a0)?;
    let rest = vector![cfg.a0, 0.0];
    let solver = match cfg.coupling {
        CouplingChoice::Kirchhoff => RiemannSolverKind::Kirchhoff,
        CouplingChoice::ModifiedKirchhoff => RiemannSolverKind::modified(&v1, &v2, &rest, &rest)?,
    };
    let gl = Grid1D::over(-cfg.length, 0.0, n_cells)?;
    let gr = Grid1D::over(0.0, cfg.length, n_cells)?;
    let pulse = PulseInflow {
        vessel: v1,
        amplitude: cfg.amplitude,
    };
    let d = CoupledDomain::new(
        v1,
        v2,
        gl,
        gr,
        RelaxationParams::with_mu(cfg.mu_left, cfg.cfl)?,
        RelaxationParams::with_mu(cfg.mu_right, cfg.cfl)?,
        rest,
        rest,
        solver,
    )?
    .with_paths(blood_paths(cfg))
    .with_outer(BoundaryKind::Prescribed(Arc::new(pulse)), BoundaryKind::Neumann);
    Ok((
        d,
        GridSolution::from_fn(gl, |_| rest),
        GridSolution::from_fn(gr, |_| rest),
    ))
}
