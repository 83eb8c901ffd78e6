use crate::error::{Error, Result};
use crate::grid::GridSolution;
use crate::models::SystemModel;
use crate::paths::PathIntegrator;
use crate::State;

use super::boundary::{apply_boundary, ghost_states, BoundaryKind, BoundarySpec};
use super::params::RelaxationParams;

/// The discrete nonlocal operator `Tⱼ[U] = Σ_{i≤j} ∫ Uᵢ₋₁ → Uᵢ`, a left-to-right
/// prefix sum starting at `ghost` (the state left of cell 0, where `T = 0`).
pub fn cumulative_t<const M: usize, S>(
    model: &S,
    paths: &PathIntegrator<M>,
    ghost: &State<M>,
    u: &[State<M>],
) -> Result<Vec<State<M>>>
where
    S: SystemModel<M> + ?Sized,
{
    let mut out = Vec::with_capacity(u.len());
    let mut acc = State::<M>::zeros();
    let mut prev = ghost;
    for (j, uj) in u.iter().enumerate() {
        acc += paths.integrate(model, prev, uj).map_err(|e| e.at(Some(j), None))?;
        out.push(acc);
        prev = uj;
    }
    Ok(out)
}

/// Value of `T` at the left ghost cell: `∫ U_a → ghost` next to a truncation
/// state, zero otherwise.
fn left_baseline<const M: usize, S>(
    spec: &BoundarySpec<M>,
    model: &S,
    paths: &PathIntegrator<M>,
    ghost: &State<M>,
) -> Result<State<M>>
where
    S: SystemModel<M> + ?Sized,
{
    match &spec.left {
        BoundaryKind::Truncation(ua) => paths.integrate(model, ua, ghost),
        _ => Ok(State::<M>::zeros()),
    }
}

/// Equilibrium initial data `V = T[U]` for the relaxation scheme.
pub fn well_prepared_v<const M: usize, S>(
    model: &S,
    paths: &PathIntegrator<M>,
    boundary: &BoundarySpec<M>,
    sol: &GridSolution<M>,
) -> Result<GridSolution<M>>
where
    S: SystemModel<M> + ?Sized,
{
    let (gl, _) = ghost_states(boundary, model, &sol.u, sol.time)?;
    let base = left_baseline(boundary, model, paths, &gl)?;
    let v = cumulative_t(model, paths, &gl, &sol.u)?
        .into_iter()
        .map(|t| t + base)
        .collect();
    sol.clone().with_v(v)
}

/// One step of the IMEX relaxation scheme for `(U, V)`:
///
/// 1. `Uⱼ ← Uⱼ − Δt/Δx (F_{j+1/2} − F_{j−1/2})`, `F_{j−1/2} = ½(Vⱼ₋₁+Vⱼ) − ½√Λ(Uⱼ−Uⱼ₋₁)`;
/// 2. `T[Uⁿ⁺¹]` by [`cumulative_t`];
/// 3. `Vⱼ ← (Vⱼ − Δt/Δx (G_{j+1/2} − G_{j−1/2}) + Δt/ε Tⱼ) / (1 + Δt/ε)`,
///    `G_{j−1/2} = ½Λ(Uⱼ₋₁+Uⱼ) − ½√Λ(Vⱼ−Vⱼ₋₁)`.
pub fn relaxation_step<const M: usize, S>(
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
    let eps = params
        .epsilon
        .ok_or_else(|| Error::InvalidParam("relaxation step needs a relaxation rate".into()))?;
    let v = sol
        .v
        .as_ref()
        .ok_or_else(|| Error::InvalidParam("relaxation step needs the auxiliary variable V".into()))?;
    let dx = sol.grid.dx();
    params.check_dt(dx, dt)?;
    let gh = apply_boundary(boundary, model, paths, sol)?;
    let (vl, vr) = (gh.v_left.unwrap_or(v[0]), gh.v_right.unwrap_or(v[v.len() - 1]));

    let n = sol.n_cells();
    let sl = params.sqrt_lambda();
    let lam = params.lambda;
    let u_at = |j: isize| -> &State<M> {
        match j {
            -1 => &gh.left,
            j if j as usize == n => &gh.right,
            j => &sol.u[j as usize],
        }
    };
    let v_at = |j: isize| -> &State<M> {
        match j {
            -1 => &vl,
            j if j as usize == n => &vr,
            j => &v[j as usize],
        }
    };
    // Interface fluxes, index i ↔ x_{i−1/2}, i = 0..=n.
    let mut f = Vec::with_capacity(n + 1);
    let mut g = Vec::with_capacity(n + 1);
    for i in 0..=n as isize {
        let (ul, ur, vl, vr) = (u_at(i - 1), u_at(i), v_at(i - 1), v_at(i));
        f.push((vl + vr) * 0.5 - sl.component_mul(&(ur - ul)) * 0.5);
        g.push(lam.component_mul(&(ul + ur)) * 0.5 - sl.component_mul(&(vr - vl)) * 0.5);
    }
    let r = dt / dx;
    let mut u_new = Vec::with_capacity(n);
    for j in 0..n {
        let next = sol.u[j] - (f[j + 1] - f[j]) * r;
        model.check(&next).map_err(|e| e.at(Some(j), Some(sol.time)))?;
        u_new.push(next);
    }

    let (gl_new, _) = ghost_states(boundary, model, &u_new, sol.time + dt)?;
    let base = left_baseline(boundary, model, paths, &gl_new)?;
    let t = cumulative_t(model, paths, &gl_new, &u_new).map_err(|e| e.at(None, Some(sol.time)))?;
    let k = dt / eps;
    let v_new = (0..n)
        .map(|j| (v[j] - (g[j + 1] - g[j]) * r + (t[j] + base) * k) / (1.0 + k))
        .collect();

    Ok(GridSolution {
        grid: sol.grid,
        u: u_new,
        v: Some(v_new),
        time: sol.time + dt,
    })
}
