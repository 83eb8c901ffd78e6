use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::grid::{Grid1D, GridSolution};
use crate::models::SystemModel;
use crate::paths::PathIntegrator;
use crate::schemes::{
    check_subchar, ghost_states, next_dt, relaxed_update, source_step, BoundaryKind, BoundarySpec, Edge,
    RelaxationParams,
};
use crate::State;

use super::solver::{join, newton, split, InterfaceData, InterfaceTerms, NewtonOptions, RiemannSolverKind};

/// Two systems on `(x_l, 0)` and `(0, x_r)` coupled at `x = 0`.
///
/// Cell `−1` is the last cell of the left grid, cell `0` the first of the right one.
#[derive(Debug, Clone)]
pub struct CoupledDomain<const M: usize, S1, S2> {
    pub left: S1,
    pub right: S2,
    pub grid_left: Grid1D,
    pub grid_right: Grid1D,
    pub params_left: RelaxationParams<M>,
    pub params_right: RelaxationParams<M>,
    /// Truncation states `U_a¹`, `U_a²`.
    pub ua1: State<M>,
    pub ua2: State<M>,
    pub solver: RiemannSolverKind<M>,
    pub paths: PathIntegrator<M>,
    pub newton: NewtonOptions,
    /// Outer boundary of the left system (at `x_l`).
    pub outer_left: BoundaryKind<M>,
    /// Outer boundary of the right system (at `x_r`).
    pub outer_right: BoundaryKind<M>,
    pub check_subchar: bool,
}

/// Result of a coupled run.
#[derive(Debug, Clone)]
pub struct CoupledRun<const M: usize> {
    pub left: GridSolution<M>,
    pub right: GridSolution<M>,
    pub steps: usize,
    pub dt: f64,
    pub max_newton_iterations: usize,
    /// Coupling data of the last step.
    pub last_interface: Option<InterfaceData<M>>,
}

/// A grid point of [`CoupledDomain::scan_roots`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint<const M: usize> {
    pub sigma_minus: State<M>,
    pub sigma_plus: State<M>,
    /// Max-norm of the second Kirchhoff block (the first is solved exactly).
    pub residual: f64,
}

impl<const M: usize, S1: SystemModel<M>, S2: SystemModel<M>> CoupledDomain<M, S1, S2> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        left: S1,
        right: S2,
        grid_left: Grid1D,
        grid_right: Grid1D,
        params_left: RelaxationParams<M>,
        params_right: RelaxationParams<M>,
        ua1: State<M>,
        ua2: State<M>,
        solver: RiemannSolverKind<M>,
    ) -> Result<Self> {
        let scale = grid_left.dx().min(grid_right.dx());
        if grid_left.x_right().abs() > 1e-9 * scale || grid_right.x_left().abs() > 1e-9 * scale {
            return Err(Error::GridMismatch(format!(
                "coupled grids must meet at x = 0, got {} and {}",
                grid_left.x_right(),
                grid_right.x_left()
            )));
        }
        params_left.validate()?;
        params_right.validate()?;
        left.check(&ua1)
            .map_err(|_| Error::InvalidParam(format!("U_a1 = {:?} is not admissible", ua1.as_slice())))?;
        right
            .check(&ua2)
            .map_err(|_| Error::InvalidParam(format!("U_a2 = {:?} is not admissible", ua2.as_slice())))?;
        Ok(CoupledDomain {
            left,
            right,
            grid_left,
            grid_right,
            params_left,
            params_right,
            ua1,
            ua2,
            solver,
            paths: PathIntegrator::segment(),
            newton: NewtonOptions::default(),
            outer_left: BoundaryKind::Neumann,
            outer_right: BoundaryKind::Neumann,
            check_subchar: cfg!(debug_assertions),
        })
    }

    pub fn with_paths(mut self, paths: PathIntegrator<M>) -> Self {
        self.paths = paths;
        self
    }

    pub fn with_outer(mut self, left: BoundaryKind<M>, right: BoundaryKind<M>) -> Self {
        self.outer_left = left;
        self.outer_right = right;
        self
    }

    pub fn with_subchar_check(mut self, on: bool) -> Self {
        self.check_subchar = on;
        self
    }

    /// Common time step, the smaller CFL step of the two sides.
    pub fn dt(&self) -> Result<f64> {
        Ok(self
            .params_left
            .dt(self.grid_left.dx())?
            .min(self.params_right.dt(self.grid_right.dx())?))
    }

    /// `P₁(u₀⁻) = ∫ U_a¹ → u₀⁻` along `A₁`.
    pub fn p1(&self, u_minus: &State<M>) -> Result<State<M>> {
        self.paths.integrate(&self.left, &self.ua1, u_minus)
    }

    /// `P₂(u₀⁺) = ∫ u₀⁺ → U_a²` along `A₂`.
    pub fn p2(&self, u_plus: &State<M>) -> Result<State<M>> {
        self.paths.integrate(&self.right, u_plus, &self.ua2)
    }

    fn terms_with(
        &self,
        p1: &State<M>,
        p2: &State<M>,
        sigma_minus: &State<M>,
        sigma_plus: &State<M>,
        u_minus: &State<M>,
        u_plus: &State<M>,
    ) -> Result<InterfaceTerms<M>> {
        let u_r = u_minus - sigma_minus.component_div(&self.params_left.sqrt_lambda());
        let u_l = u_plus + sigma_plus.component_div(&self.params_right.sqrt_lambda());
        Ok(InterfaceTerms {
            sigma_minus: *sigma_minus,
            sigma_plus: *sigma_plus,
            u_r,
            u_l,
            p1: *p1,
            p2: *p2,
            i1: self.paths.integrate(&self.left, u_minus, &u_r)?,
            i2: self.paths.integrate(&self.right, &u_l, u_plus)?,
        })
    }

    /// All ingredients of the coupling conditions at `(Σ⁻, Σ⁺)`.
    pub fn interface_terms(
        &self,
        sigma_minus: &State<M>,
        sigma_plus: &State<M>,
        u_minus: &State<M>,
        u_plus: &State<M>,
    ) -> Result<InterfaceTerms<M>> {
        let (p1, p2) = (self.p1(u_minus)?, self.p2(u_plus)?);
        self.terms_with(&p1, &p2, sigma_minus, sigma_plus, u_minus, u_plus)
    }

    /// The two residual blocks of the selected coupling conditions.
    pub fn kirchhoff_residual(
        &self,
        sigma_minus: &State<M>,
        sigma_plus: &State<M>,
        u_minus: &State<M>,
        u_plus: &State<M>,
    ) -> Result<(State<M>, State<M>)> {
        Ok(self
            .solver
            .residual(&self.interface_terms(sigma_minus, sigma_plus, u_minus, u_plus)?))
    }

    /// Solve the coupling conditions for the traces `u₀⁻ = U₋₁`, `u₀⁺ = U₀` by
    /// Newton's method started at `Σ⁻ = Σ⁺ = 0`.
    pub fn solve_riemann(&self, u_minus: &State<M>, u_plus: &State<M>) -> Result<InterfaceData<M>> {
        self.left.check(u_minus)?;
        self.right.check(u_plus)?;
        let (p1, p2) = (self.p1(u_minus)?, self.p2(u_plus)?);
        let f = |x: &DVector<f64>| -> Result<DVector<f64>> {
            let (sm, sp) = split::<M>(x);
            let t = self.terms_with(&p1, &p2, &sm, &sp, u_minus, u_plus)?;
            let (b1, b2) = self.solver.residual(&t);
            Ok(join(&b1, &b2))
        };
        let res = newton(f, DVector::zeros(2 * M), &self.newton)?;
        let (sigma_minus, sigma_plus) = split::<M>(&res.x);
        Ok(InterfaceData {
            sigma_minus,
            sigma_plus,
            u_r: u_minus - sigma_minus.component_div(&self.params_left.sqrt_lambda()),
            v_r: p1 + sigma_minus,
            u_l: u_plus + sigma_plus.component_div(&self.params_right.sqrt_lambda()),
            v_l: sigma_plus - p2,
            iterations: res.iterations,
            residual: res.residual,
        })
    }

    /// Brute-force scan for roots of the Kirchhoff conditions around `center`.
    ///
    /// The first block fixes `Σ⁺ = Σ⁻ + P₁ + P₂ + F₁(U_a¹) − F₂(U_a²)`, so only
    /// `Σ⁻` is scanned, over the box `center ± half_width` with `n` points per
    /// axis. Returns the grid points that are local minima of the second block
    /// residual, best first. Inadmissible points are skipped.
    pub fn scan_roots(
        &self,
        u_minus: &State<M>,
        u_plus: &State<M>,
        center: &State<M>,
        half_width: &State<M>,
        n: usize,
    ) -> Result<Vec<ScanPoint<M>>> {
        if matches!(self.solver, RiemannSolverKind::Custom(_)) {
            return Err(Error::InvalidParam("root scans need Kirchhoff-type conditions".into()));
        }
        if n < 3 {
            return Err(Error::InvalidParam("root scans need at least 3 points per axis".into()));
        }
        let total = n
            .checked_pow(M as u32)
            .filter(|&t| t <= 4_000_000)
            .ok_or_else(|| Error::InvalidParam(format!("scan grid of {n}^{M} points is too large")))?;
        let (p1, p2) = (self.p1(u_minus)?, self.p2(u_plus)?);
        let shift = p1 + p2 + self.solver.flux_offset();
        let index = |flat: usize| -> [usize; M] {
            let mut idx = [0; M];
            let mut rest = flat;
            for slot in idx.iter_mut() {
                *slot = rest % n;
                rest /= n;
            }
            idx
        };
        let mut res = vec![f64::INFINITY; total];
        for (flat, r) in res.iter_mut().enumerate() {
            let idx = index(flat);
            let sm =
                State::<M>::from_fn(|i, _| center[i] + half_width[i] * (2.0 * idx[i] as f64 / (n - 1) as f64 - 1.0));
            let sp = sm + shift;
            if let Ok(t) = self.terms_with(&p1, &p2, &sm, &sp, u_minus, u_plus) {
                *r = self.solver.residual(&t).1.amax();
            }
        }
        let mut out = Vec::new();
        for flat in 0..total {
            if !res[flat].is_finite() {
                continue;
            }
            let idx = index(flat);
            let mut stride = 1;
            let mut is_min = true;
            for &i in idx.iter() {
                if (i > 0 && res[flat - stride] < res[flat]) || (i + 1 < n && res[flat + stride] < res[flat]) {
                    is_min = false;
                    break;
                }
                stride *= n;
            }
            if is_min {
                let sm = State::<M>::from_fn(|i, _| {
                    center[i] + half_width[i] * (2.0 * idx[i] as f64 / (n - 1) as f64 - 1.0)
                });
                out.push(ScanPoint {
                    sigma_minus: sm,
                    sigma_plus: sm + shift,
                    residual: res[flat],
                });
            }
        }
        out.sort_by(|a, b| a.residual.total_cmp(&b.residual));
        Ok(out)
    }

    /// Coupling error `|P₁(U₋₁) + P₂(U₀) + F₁(U_a¹) − F₂(U_a²)|` per component
    /// (the flux offset only for the modified conditions).
    pub fn coupling_error(&self, left: &GridSolution<M>, right: &GridSolution<M>) -> Result<State<M>> {
        let (um, up) = traces(left, right)?;
        Ok((self.p1(um)? + self.p2(up)? + self.solver.flux_offset()).abs())
    }

    /// `T¹ⱼ = ∫ U_a¹ → U_ghost + Σ_{i≤j} ∫ Uᵢ₋₁ → Uᵢ` on the left cells.
    pub fn t1_prefix(&self, left: &GridSolution<M>) -> Result<Vec<State<M>>> {
        let (g, _) = ghost_states(&self.left_spec(), &self.left, &left.u, left.time)?;
        let mut acc = self.paths.integrate(&self.left, &self.ua1, &g)?;
        let mut prev = g;
        let mut out = Vec::with_capacity(left.u.len());
        for u in &left.u {
            acc += self.paths.integrate(&self.left, &prev, u)?;
            out.push(acc);
            prev = *u;
        }
        Ok(out)
    }

    /// `T²ⱼ = −Σ_{i>j} ∫ Uᵢ₋₁ → Uᵢ − ∫ U_ghost → U_a²` on the right cells.
    pub fn t2_suffix(&self, right: &GridSolution<M>) -> Result<Vec<State<M>>> {
        let (_, g) = ghost_states(&self.right_spec(), &self.right, &right.u, right.time)?;
        let mut acc = -self.paths.integrate(&self.right, &g, &self.ua2)?;
        let mut next = g;
        let mut out = vec![State::<M>::zeros(); right.u.len()];
        for (j, u) in right.u.iter().enumerate().rev() {
            acc -= self.paths.integrate(&self.right, u, &next)?;
            out[j] = acc;
            next = *u;
        }
        Ok(out)
    }

    fn left_spec(&self) -> BoundarySpec<M> {
        BoundarySpec {
            left: self.outer_left.clone(),
            right: BoundaryKind::Neumann,
        }
    }

    fn right_spec(&self) -> BoundarySpec<M> {
        BoundarySpec {
            left: BoundaryKind::Neumann,
            right: self.outer_right.clone(),
        }
    }

    /// One step of the coupled relaxed scheme followed by the source steps.
    ///
    /// Away from `x = 0` both sides run the relaxed scheme; the interface
    /// fluctuations are `Σ⁻` into cell `−1` and `−Σ⁺` into cell `0`.
    pub fn step(
        &self,
        left: &GridSolution<M>,
        right: &GridSolution<M>,
        dt: f64,
    ) -> Result<(GridSolution<M>, GridSolution<M>, InterfaceData<M>)> {
        let limit = self.dt()?;
        if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
            return Err(Error::CflViolation { dt, limit });
        }
        let t = left.time;
        let (um, up) = traces(left, right)?;
        let data = self.solve_riemann(um, up).map_err(|e| e.at(None, Some(t)))?;
        let (into_left, into_right) = data.fluctuations();
        let (gl, _) = ghost_states(&self.left_spec(), &self.left, &left.u, t)?;
        let (_, gr) = ghost_states(&self.right_spec(), &self.right, &right.u, t)?;

        let u1 = relaxed_update(
            &self.left,
            &self.paths,
            &self.params_left.sqrt_lambda(),
            dt / self.grid_left.dx(),
            &left.u,
            Edge::Ghost(gl),
            Edge::Fluctuation(into_left),
            t,
        )?;
        let u2 = relaxed_update(
            &self.right,
            &self.paths,
            &self.params_right.sqrt_lambda(),
            dt / self.grid_right.dx(),
            &right.u,
            Edge::Fluctuation(into_right),
            Edge::Ghost(gr),
            t,
        )?;
        let mut l = GridSolution {
            grid: self.grid_left,
            u: u1,
            v: None,
            time: t,
        };
        let mut r = GridSolution {
            grid: self.grid_right,
            u: u2,
            v: None,
            time: t,
        };
        source_step(&self.left, dt, &mut l)?;
        source_step(&self.right, dt, &mut r)?;
        l.time = t + dt;
        r.time = t + dt;
        if self.check_subchar {
            check_subchar(&self.left, self.params_left.min_lambda(), &l)?;
            check_subchar(&self.right, self.params_right.min_lambda(), &r)?;
        }
        Ok((l, r, data))
    }

    /// Advance both sides to `t_end`, calling `observe` after every step with the
    /// new solutions and the coupling data used for the step.
    pub fn evolve_with(
        &self,
        mut left: GridSolution<M>,
        mut right: GridSolution<M>,
        t_end: f64,
        mut observe: impl FnMut(&GridSolution<M>, &GridSolution<M>, &InterfaceData<M>) -> Result<()>,
    ) -> Result<CoupledRun<M>> {
        if left.grid != self.grid_left || right.grid != self.grid_right {
            return Err(Error::GridMismatch("solutions do not live on the coupled grids".into()));
        }
        if left.time != right.time || !t_end.is_finite() || t_end < left.time {
            return Err(Error::InvalidParam(format!(
                "cannot advance from t = {} / {} to {t_end}",
                left.time, right.time
            )));
        }
        let dt = self.dt()?;
        let mut steps = 0;
        let mut max_it = 0;
        let mut last = None;
        while let Some(h) = next_dt(left.time, t_end, dt) {
            let (l, r, data) = self.step(&left, &right, h)?;
            left = l;
            right = r;
            steps += 1;
            max_it = max_it.max(data.iterations);
            observe(&left, &right, &data)?;
            last = Some(data);
        }
        left.time = t_end;
        right.time = t_end;
        Ok(CoupledRun {
            left,
            right,
            steps,
            dt,
            max_newton_iterations: max_it,
            last_interface: last,
        })
    }

    pub fn evolve(&self, left: GridSolution<M>, right: GridSolution<M>, t_end: f64) -> Result<CoupledRun<M>> {
        self.evolve_with(left, right, t_end, |_, _, _| Ok(()))
    }
}

fn traces<'a, const M: usize>(
    left: &'a GridSolution<M>,
    right: &'a GridSolution<M>,
) -> Result<(&'a State<M>, &'a State<M>)> {
    match (left.u.last(), right.u.first()) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::InvalidParam(
            "coupled domains need at least one cell per side".into(),
        )),
    }
}
