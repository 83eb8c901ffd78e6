use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::GridSolution;
use crate::models::SystemModel;
use crate::paths::PathIntegrator;
use crate::State;

/// Supplies a ghost state from the adjacent interior state at time `t`.
pub trait GhostProvider<const M: usize>: Send + Sync {
    fn ghost(&self, t: f64, interior: &State<M>) -> Result<State<M>>;

    fn describe(&self) -> String;
}

/// Boundary treatment on one side of a domain.
#[derive(Clone)]
pub enum BoundaryKind<const M: usize> {
    /// Homogeneous Neumann: copy the adjacent cell.
    Neumann,
    /// Far-field truncation state `U_a`, used as the ghost.
    Truncation(State<M>),
    /// Ghost computed from boundary data, e.g. a prescribed pressure.
    Prescribed(Arc<dyn GhostProvider<M>>),
}

impl<const M: usize> fmt::Debug for BoundaryKind<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryKind::Neumann => write!(f, "Neumann"),
            BoundaryKind::Truncation(ua) => write!(f, "Truncation({:?})", ua.as_slice()),
            BoundaryKind::Prescribed(p) => write!(f, "Prescribed({})", p.describe()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone)]
pub struct BoundarySpec<const M: usize> {
    pub left: BoundaryKind<M>,
    pub right: BoundaryKind<M>,
}

impl<const M: usize> BoundarySpec<M> {
    pub fn neumann() -> Self {
        BoundarySpec {
            left: BoundaryKind::Neumann,
            right: BoundaryKind::Neumann,
        }
    }

    pub fn validate<S: SystemModel<M> + ?Sized>(&self, model: &S) -> Result<()> {
        for kind in [&self.left, &self.right] {
            if let BoundaryKind::Truncation(ua) = kind {
                model.check(ua).map_err(|_| {
                    Error::InvalidParam(format!("truncation state {:?} is not admissible", ua.as_slice()))
                })?;
            }
        }
        Ok(())
    }
}

/// Ghost states on both sides; the `V` ghosts are present for finite-ε runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Ghosts<const M: usize> {
    pub left: State<M>,
    pub right: State<M>,
    pub v_left: Option<State<M>>,
    pub v_right: Option<State<M>>,
}

/// `V` ghost next to a truncation state: `∫ U_a → U_ghost` on the left and
/// `−∫ U_ghost → U_a` on the right.
pub fn truncation_v_ghost<const M: usize, S>(
    model: &S,
    paths: &PathIntegrator<M>,
    side: Side,
    ua: &State<M>,
    ghost: &State<M>,
) -> Result<State<M>>
where
    S: SystemModel<M> + ?Sized,
{
    match side {
        Side::Left => paths.integrate(model, ua, ghost),
        Side::Right => Ok(-paths.integrate(model, ghost, ua)?),
    }
}

/// `U` ghost states next to the first and last of the cells `u` at time `t`.
pub fn ghost_states<const M: usize, S>(
    spec: &BoundarySpec<M>,
    model: &S,
    u: &[State<M>],
    t: f64,
) -> Result<(State<M>, State<M>)>
where
    S: SystemModel<M> + ?Sized,
{
    let (Some(first), Some(last)) = (u.first(), u.last()) else {
        return Err(Error::InvalidParam("empty grid".into()));
    };
    let pick = |kind: &BoundaryKind<M>, interior: &State<M>| -> Result<State<M>> {
        let g = match kind {
            BoundaryKind::Neumann => *interior,
            BoundaryKind::Truncation(ua) => *ua,
            BoundaryKind::Prescribed(p) => p.ghost(t, interior)?,
        };
        model.check(&g).map_err(|e| e.at(None, Some(t)))?;
        Ok(g)
    };
    Ok((pick(&spec.left, first)?, pick(&spec.right, last)?))
}

/// Ghost states for `sol` at its current time.
///
/// `V` ghosts: truncation sides follow [`truncation_v_ghost`]; other sides keep
/// the discrete relation `Vⱼ − Vⱼ₋₁ = ∫ Uⱼ₋₁ → Uⱼ`, which reduces to a copy for
/// Neumann data.
pub fn apply_boundary<const M: usize, S>(
    spec: &BoundarySpec<M>,
    model: &S,
    paths: &PathIntegrator<M>,
    sol: &GridSolution<M>,
) -> Result<Ghosts<M>>
where
    S: SystemModel<M> + ?Sized,
{
    let (left, right) = ghost_states(spec, model, &sol.u, sol.time)?;
    let n = sol.n_cells();
    let (first, last) = (sol.u[0], sol.u[n - 1]);
    let (v_left, v_right) = match &sol.v {
        None => (None, None),
        Some(v) => {
            let vl = match &spec.left {
                BoundaryKind::Neumann => v[0],
                BoundaryKind::Truncation(ua) => truncation_v_ghost(model, paths, Side::Left, ua, &left)?,
                BoundaryKind::Prescribed(_) => v[0] - paths.integrate(model, &left, &first)?,
            };
            let vr = match &spec.right {
                BoundaryKind::Neumann => v[n - 1],
                BoundaryKind::Truncation(ua) => truncation_v_ghost(model, paths, Side::Right, ua, &right)?,
                BoundaryKind::Prescribed(_) => v[n - 1] + paths.integrate(model, &last, &right)?,
            };
            (Some(vl), Some(vr))
        }
    };
    Ok(Ghosts {
        left,
        right,
        v_left,
        v_right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;
    use crate::models::BloodVessel;
    use nalgebra::vector;

    fn vessel() -> BloodVessel {
        BloodVessel::new(1.0, 0.005 * std::f64::consts::PI.sqrt())
    }

    #[test]
    fn neumann_copies() {
        let g = Grid1D::over(0.0, 1.0, 3).unwrap();
        let sol = GridSolution::from_fn(g, |_| vector![5.0, 0.1])
            .with_v(vec![vector![1.0, 2.0]; 3])
            .unwrap();
        let gh = apply_boundary(&BoundarySpec::neumann(), &vessel(), &PathIntegrator::segment(), &sol).unwrap();
        assert_eq!(gh.left, vector![5.0, 0.1]);
        assert_eq!(gh.right, vector![5.0, 0.1]);
        assert_eq!(gh.v_left, Some(vector![1.0, 2.0]));
        assert_eq!(gh.v_right, Some(vector![1.0, 2.0]));
    }

    #[test]
    fn truncation_ghosts() {
        let ua = vector![5.0, 0.0];
        let spec = BoundarySpec {
            left: BoundaryKind::Truncation(ua),
            right: BoundaryKind::Truncation(ua),
        };
        let g = Grid1D::over(0.0, 1.0, 2).unwrap();
        let sol = GridSolution::from_fn(g, |_| vector![5.2, 0.05])
            .with_v(vec![State::<2>::zeros(); 2])
            .unwrap();
        let paths = PathIntegrator::segment();
        let gh = apply_boundary(&spec, &vessel(), &paths, &sol).unwrap();
        assert_eq!(gh.left, ua);
        assert_eq!(gh.v_left, Some(State::<2>::zeros()));
        assert_eq!(gh.v_right, Some(State::<2>::zeros()));

        let v = truncation_v_ghost(&vessel(), &paths, Side::Left, &ua, &vector![5.0, 0.1]).unwrap();
        assert!((v - vector![0.5, 0.005]).amax() < 1e-14);
        let v = truncation_v_ghost(&vessel(), &paths, Side::Right, &ua, &vector![5.0, 0.1]).unwrap();
        assert!((v - vector![0.5, 0.005]).amax() < 1e-14);
    }

    #[test]
    fn inadmissible_truncation_state() {
        let spec = BoundarySpec {
            left: BoundaryKind::Truncation(vector![-1.0, 0.0]),
            right: BoundaryKind::Neumann,
        };
        assert!(spec.validate(&vessel()).is_err());
    }
}
