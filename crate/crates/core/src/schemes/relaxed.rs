use crate::error::Result;
use crate::grid::GridSolution;
use crate::models::SystemModel;
use crate::paths::PathIntegrator;
use crate::State;

use super::boundary::{ghost_states, BoundarySpec};
use super::params::RelaxationParams;

/// The fluctuations `(D⁻, D⁺)` of the relaxed scheme across the jump `U_L → U_R`:
/// `D∓ = ½∫A dΦ ∓ ½√Λ(U_R − U_L)`. `D⁻` acts on the left cell, `D⁺` on the right one.
pub fn fluctuations<const M: usize, S>(
    model: &S,
    paths: &PathIntegrator<M>,
    sqrt_lambda: &State<M>,
    ul: &State<M>,
    ur: &State<M>,
) -> Result<(State<M>, State<M>)>
where
    S: SystemModel<M> + ?Sized,
{
    let half_b = paths.integrate(model, ul, ur)? * 0.5;
    let visc = sqrt_lambda.component_mul(&(ur - ul)) * 0.5;
    Ok((half_b - visc, half_b + visc))
}

/// What sits beyond an end cell of a block of cells.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Edge<const M: usize> {
    /// A ghost state; the fluctuation follows from [`fluctuations`].
    Ghost(State<M>),
    /// The fluctuation into the end cell is given directly (coupling interfaces).
    Fluctuation(State<M>),
}

/// One relaxed step on a contiguous block of cells. Non-admissible output is
/// reported with the offending cell index and `time`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn relaxed_update<const M: usize, S>(
    model: &S,
    paths: &PathIntegrator<M>,
    sqrt_lambda: &State<M>,
    dt_dx: f64,
    u: &[State<M>],
    left: Edge<M>,
    right: Edge<M>,
    time: f64,
) -> Result<Vec<State<M>>>
where
    S: SystemModel<M> + ?Sized,
{
    let n = u.len();
    // acc[j] collects D⁺_{j−1/2} + D⁻_{j+1/2}.
    let mut acc = vec![State::<M>::zeros(); n];
    let fluct = |ul: &State<M>, ur: &State<M>, cell: usize| {
        fluctuations(model, paths, sqrt_lambda, ul, ur).map_err(|e| e.at(Some(cell), Some(time)))
    };
    match left {
        Edge::Ghost(g) => acc[0] += fluct(&g, &u[0], 0)?.1,
        Edge::Fluctuation(d) => acc[0] += d,
    }
    for j in 1..n {
        let (dm, dp) = fluct(&u[j - 1], &u[j], j)?;
        acc[j - 1] += dm;
        acc[j] += dp;
    }
    match right {
        Edge::Ghost(g) => acc[n - 1] += fluct(&u[n - 1], &g, n - 1)?.0,
        Edge::Fluctuation(d) => acc[n - 1] += d,
    }
    let mut out = Vec::with_capacity(n);
    for (j, (uj, dj)) in u.iter().zip(&acc).enumerate() {
        let next = uj - dj * dt_dx;
        model.check(&next).map_err(|e| e.at(Some(j), Some(time)))?;
        out.push(next);
    }
    Ok(out)
}

/// One step of the relaxed scheme
/// `Uⱼ ← Uⱼ − Δt/(2Δx)(B_{j−1/2} + B_{j+1/2}) + Δt/(2Δx)√Λ(Uⱼ₋₁ − 2Uⱼ + Uⱼ₊₁)`
/// with `B` the path integral across each interface. `V`, if present, is dropped.
pub fn relaxed_step<const M: usize, S>(
    model: &S,
    paths: &PathIntegrator<M>,
    params: &RelaxationParams<M>,
    boundary: &BoundarySpec<M>,
    sol: &GridSolution<M>,
    dt: f64,
) -> Result<GridSolution<M>>
where
    S: SystemModel<M> + ?Sized,
{
    let dx = sol.grid.dx();
    params.check_dt(dx, dt)?;
    let (gl, gr) = ghost_states(boundary, model, &sol.u, sol.time)?;
    let u = relaxed_update(
        model,
        paths,
        &params.sqrt_lambda(),
        dt / dx,
        &sol.u,
        Edge::Ghost(gl),
        Edge::Ghost(gr),
        sol.time,
    )?;
    Ok(GridSolution {
        grid: sol.grid,
        u,
        v: None,
        time: sol.time + dt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;
    use crate::models::{LinearModel, TwoLayerSwe};
    use nalgebra::{matrix, vector};

    #[test]
    fn scalar_upwind_shift() {
        let model = LinearModel::new(matrix![1.0]).unwrap();
        let params = RelaxationParams::<1>::with_mu(1.0, 1.0).unwrap();
        let grid = Grid1D::over(0.0, 3.0, 3).unwrap();
        let sol = GridSolution::new(grid, vec![vector![0.0], vector![1.0], vector![0.0]]).unwrap();
        let out = relaxed_step(
            &model,
            &PathIntegrator::segment(),
            &params,
            &BoundarySpec::neumann(),
            &sol,
            1.0,
        )
        .unwrap();
        assert_eq!(out.u[1][0], 0.0);
        assert_eq!(out.u[2][0], 1.0);
        assert_eq!(out.time, 1.0);
    }

    #[test]
    fn constant_state_is_fixed() {
        let swe = TwoLayerSwe::default();
        let params = RelaxationParams::<4>::with_mu(25.0, 0.9).unwrap();
        let grid = Grid1D::over(-1.0, 1.0, 16).unwrap();
        let c = vector![0.7, 0.2, 1.3, -0.1];
        let sol = GridSolution::from_fn(grid, |_| c);
        let dt = params.dt(grid.dx()).unwrap();
        let out = relaxed_step(
            &swe,
            &PathIntegrator::segment(),
            &params,
            &BoundarySpec::neumann(),
            &sol,
            dt,
        )
        .unwrap();
        assert!(out.u.iter().all(|u| *u == c));
    }

    #[test]
    fn fluctuations_sum_to_path_integral() {
        let swe = TwoLayerSwe::default();
        let p = PathIntegrator::segment();
        let sl = vector![5.0, 5.0, 5.0, 5.0];
        let ul = vector![0.3, 0.1, 1.7, 0.0];
        let ur = vector![1.1, -0.2, 0.9, 0.05];
        let (dm, dp) = fluctuations(&swe, &p, &sl, &ul, &ur).unwrap();
        let b = p.integrate(&swe, &ul, &ur).unwrap();
        assert!((dm + dp - b).amax() <= 1e-14 * (1.0 + b.amax()));
        let (z1, z2) = fluctuations(&swe, &p, &sl, &ul, &ul).unwrap();
        assert_eq!((z1, z2), (State::<4>::zeros(), State::<4>::zeros()));
    }

    #[test]
    fn rejects_large_dt() {
        let model = LinearModel::new(matrix![1.0]).unwrap();
        let params = RelaxationParams::<1>::with_mu(1.0, 0.5).unwrap();
        let grid = Grid1D::over(0.0, 1.0, 4).unwrap();
        let sol = GridSolution::from_fn(grid, |_| vector![1.0]);
        let r = relaxed_step(
            &model,
            &PathIntegrator::segment(),
            &params,
            &BoundarySpec::neumann(),
            &sol,
            0.2,
        );
        assert!(matches!(r, Err(crate::Error::CflViolation { .. })));
    }
}
