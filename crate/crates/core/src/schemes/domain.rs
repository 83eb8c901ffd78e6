use crate::error::{Error, Location, Result};
use crate::grid::GridSolution;
use crate::models::SystemModel;
use crate::paths::PathIntegrator;

use super::boundary::BoundarySpec;
use super::params::RelaxationParams;
use super::relaxation::{relaxation_step, well_prepared_v};
use super::relaxed::relaxed_step;
use super::source::source_step;

/// Which single-domain integrator to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    /// The local ε → 0 limit scheme.
    Relaxed,
    /// The IMEX scheme for `(U, V)` at the rate stored in [`RelaxationParams::epsilon`].
    Relaxation,
}

/// Step counts of a finished run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunStats {
    pub steps: usize,
    /// The CFL time step (the last step may be shorter).
    pub dt: f64,
}

/// A model on a single grid with its relaxation parameters and boundary data.
#[derive(Debug, Clone)]
pub struct Domain<const M: usize, S> {
    pub model: S,
    pub paths: PathIntegrator<M>,
    pub params: RelaxationParams<M>,
    pub boundary: BoundarySpec<M>,
    /// Check `max_speed² ≤ min λᵢ` on every state after each step.
    pub check_subchar: bool,
}

impl<const M: usize, S: SystemModel<M>> Domain<M, S> {
    pub fn new(model: S, params: RelaxationParams<M>, boundary: BoundarySpec<M>) -> Result<Self> {
        params.validate()?;
        boundary.validate(&model)?;
        Ok(Domain {
            model,
            paths: PathIntegrator::segment(),
            params,
            boundary,
            check_subchar: cfg!(debug_assertions),
        })
    }

    pub fn with_paths(mut self, paths: PathIntegrator<M>) -> Self {
        self.paths = paths;
        self
    }

    pub fn with_subchar_check(mut self, on: bool) -> Self {
        self.check_subchar = on;
        self
    }

    /// One hyperbolic step followed by the source step.
    pub fn step(&self, sol: &GridSolution<M>, dt: f64, kind: SchemeKind) -> Result<GridSolution<M>> {
        let (m, p, prm, bc) = (&self.model, &self.paths, &self.params, &self.boundary);
        let mut next = match kind {
            SchemeKind::Relaxed => relaxed_step(m, p, prm, bc, sol, dt)?,
            SchemeKind::Relaxation => relaxation_step(m, p, prm, bc, sol, dt)?,
        };
        next.time = sol.time;
        source_step(m, dt, &mut next)?;
        next.time = sol.time + dt;
        if self.check_subchar {
            check_subchar(m, self.params.min_lambda(), &next)?;
        }
        Ok(next)
    }

    /// Advance to `t_end` with the CFL step, clipping the final step. The
    /// relaxation scheme starts from well-prepared `V = T[U]` if `sol` has no `V`.
    pub fn evolve(&self, sol: GridSolution<M>, t_end: f64, kind: SchemeKind) -> Result<(GridSolution<M>, RunStats)> {
        self.evolve_with(sol, t_end, kind, |_| Ok(()))
    }

    /// [`Domain::evolve`], calling `observe` after every step.
    pub fn evolve_with(
        &self,
        mut sol: GridSolution<M>,
        t_end: f64,
        kind: SchemeKind,
        mut observe: impl FnMut(&GridSolution<M>) -> Result<()>,
    ) -> Result<(GridSolution<M>, RunStats)> {
        if !t_end.is_finite() || t_end < sol.time {
            return Err(Error::InvalidParam(format!(
                "end time {t_end} lies before the start time {}",
                sol.time
            )));
        }
        for (j, u) in sol.u.iter().enumerate() {
            self.model.check(u).map_err(|e| e.at(Some(j), Some(sol.time)))?;
        }
        if kind == SchemeKind::Relaxation && sol.v.is_none() {
            sol = well_prepared_v(&self.model, &self.paths, &self.boundary, &sol)?;
        }
        let dt = self.params.dt(sol.grid.dx())?;
        let mut steps = 0;
        while let Some(h) = next_dt(sol.time, t_end, dt) {
            sol = self.step(&sol, h, kind)?;
            steps += 1;
            observe(&sol)?;
        }
        sol.time = t_end;
        Ok((sol, RunStats { steps, dt }))
    }
}

/// The next step size towards `t_end`, or `None` once there.
pub(crate) fn next_dt(t: f64, t_end: f64, dt: f64) -> Option<f64> {
    let rest = t_end - t;
    // Steps shorter than this are rounding leftovers of the clipped final step.
    if rest <= 1e-12 * dt.max(t_end.abs()) {
        None
    } else if rest < dt * (1.0 + 1e-12) {
        Some(rest)
    } else {
        Some(dt)
    }
}

pub(crate) fn check_subchar<const M: usize, S>(model: &S, bound: f64, sol: &GridSolution<M>) -> Result<()>
where
    S: SystemModel<M> + ?Sized,
{
    for (j, u) in sol.u.iter().enumerate() {
        let c = model.max_speed(u).map_err(|e| e.at(Some(j), Some(sol.time)))?;
        if c * c > bound {
            return Err(Error::Subcharacteristic {
                speed_sq: c * c,
                bound,
                location: Location {
                    cell: Some(j),
                    time: Some(sol.time),
                },
            });
        }
    }
    Ok(())
}
