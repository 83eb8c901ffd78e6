use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::models::SystemModel;
use crate::State;

/// Everything a coupling condition may depend on for a trial `(Σ⁻, Σ⁺)`.
///
/// The coupling states lie on the Lax curves of the relaxation system:
/// `U_R = u₀⁻ − Σ⁻/√Λ₁`, `U_L = u₀⁺ + Σ⁺/√Λ₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceTerms<const M: usize> {
    pub sigma_minus: State<M>,
    pub sigma_plus: State<M>,
    pub u_r: State<M>,
    pub u_l: State<M>,
    /// `P₁ = ∫ U_a¹ → u₀⁻` along `A₁`.
    pub p1: State<M>,
    /// `P₂ = ∫ u₀⁺ → U_a²` along `A₂`.
    pub p2: State<M>,
    /// `∫ u₀⁻ → U_R` along `A₁`.
    pub i1: State<M>,
    /// `∫ U_L → u₀⁺` along `A₂`.
    pub i2: State<M>,
}

/// A user-supplied coupling condition `Ψ(Σ⁻, Σ⁺) = 0` with `2M` equations.
pub trait CouplingCondition<const M: usize>: Send + Sync {
    fn residual(&self, terms: &InterfaceTerms<M>) -> (State<M>, State<M>);

    fn describe(&self) -> String;
}

/// The Riemann solver used at the coupling interface.
#[derive(Clone)]
pub enum RiemannSolverKind<const M: usize> {
    /// Path-conservative Kirchhoff conditions:
    /// `P₁ + Σ⁻ + P₂ − Σ⁺ = 0` and `P₁ + ∫u₀⁻→U_R + P₂ + ∫U_L→u₀⁺ = 0`.
    Kirchhoff,
    /// Kirchhoff conditions shifted by the fluxes at the truncation states,
    /// `F₁(U_a¹) − F₂(U_a²)` added to both blocks.
    ModifiedKirchhoff {
        f1: State<M>,
        f2: State<M>,
    },
    Custom(Arc<dyn CouplingCondition<M>>),
}

impl<const M: usize> fmt::Debug for RiemannSolverKind<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RiemannSolverKind::Kirchhoff => write!(f, "Kirchhoff"),
            RiemannSolverKind::ModifiedKirchhoff { f1, f2 } => {
                write!(
                    f,
                    "ModifiedKirchhoff(F1 = {:?}, F2 = {:?})",
                    f1.as_slice(),
                    f2.as_slice()
                )
            }
            RiemannSolverKind::Custom(c) => write!(f, "Custom({})", c.describe()),
        }
    }
}

impl<const M: usize> RiemannSolverKind<M> {
    /// Modified Kirchhoff conditions with the flux offsets evaluated at the
    /// truncation states; both models must be conservative.
    pub fn modified<S1, S2>(left: &S1, right: &S2, ua1: &State<M>, ua2: &State<M>) -> Result<Self>
    where
        S1: SystemModel<M> + ?Sized,
        S2: SystemModel<M> + ?Sized,
    {
        if !left.is_conservative() || !right.is_conservative() {
            return Err(Error::InvalidParam(
                "modified Kirchhoff conditions need conservative models on both sides".into(),
            ));
        }
        Ok(RiemannSolverKind::ModifiedKirchhoff {
            f1: left.flux(ua1)?,
            f2: right.flux(ua2)?,
        })
    }

    /// `F₁(U_a¹) − F₂(U_a²)` for the modified conditions, zero otherwise.
    pub fn flux_offset(&self) -> State<M> {
        match self {
            RiemannSolverKind::ModifiedKirchhoff { f1, f2 } => f1 - f2,
            _ => State::<M>::zeros(),
        }
    }

    pub fn residual(&self, t: &InterfaceTerms<M>) -> (State<M>, State<M>) {
        match self {
            RiemannSolverKind::Custom(c) => c.residual(t),
            _ => {
                let off = self.flux_offset();
                (
                    t.p1 + t.sigma_minus + t.p2 - t.sigma_plus + off,
                    t.p1 + t.i1 + t.p2 + t.i2 + off,
                )
            }
        }
    }
}

/// Coupling data returned by the Riemann solver.
///
/// `v_r`/`v_l` use the local representation `V₀⁻ = P₁`, `V₀⁺ = −P₂` of the
/// nonlocal traces; [`InterfaceData::rebased`] substitutes the actual values
/// `T¹₋₁`, `T²₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceData<const M: usize> {
    pub sigma_minus: State<M>,
    pub sigma_plus: State<M>,
    pub u_r: State<M>,
    pub v_r: State<M>,
    pub u_l: State<M>,
    pub v_l: State<M>,
    /// Newton updates taken (0 when the initial guess is already a root).
    pub iterations: usize,
    /// Max-norm of the final residual.
    pub residual: f64,
}

impl<const M: usize> InterfaceData<M> {
    /// Coupling data with `V₀⁻ = t1` and `V₀⁺ = t2`.
    pub fn rebased(&self, t1: &State<M>, t2: &State<M>) -> Self {
        InterfaceData {
            v_r: t1 + self.sigma_minus,
            v_l: t2 + self.sigma_plus,
            ..self.clone()
        }
    }

    /// Interface fluxes `(H⁻, H⁺) = (V_R, V_L)` of the conservative form.
    pub fn fluxes(&self) -> (State<M>, State<M>) {
        (self.v_r, self.v_l)
    }

    /// Fluctuations into the cells left and right of the interface, `(Σ⁻, −Σ⁺)`.
    pub fn fluctuations(&self) -> (State<M>, State<M>) {
        (self.sigma_minus, -self.sigma_plus)
    }
}

/// Newton iteration settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Absolute max-norm residual tolerance.
    pub tol: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
    /// Relative finite-difference step, `h = fd_step (1 + |σ|)`.
    pub fd_step: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol: 1e-12,
            max_iter: 50,
            max_halvings: 20,
            fd_step: 1e-7,
        }
    }
}

#[derive(Debug)]
pub(crate) struct NewtonResult {
    pub x: DVector<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Damped Newton with a forward-difference Jacobian. `f` returning `Err` marks
/// a trial point as inadmissible; the step is then halved.
pub(crate) fn newton(
    mut f: impl FnMut(&DVector<f64>) -> Result<DVector<f64>>,
    x0: DVector<f64>,
    opts: &NewtonOptions,
) -> Result<NewtonResult> {
    let n = x0.len();
    let mut x = x0;
    let mut r = f(&x)?;
    let mut norm = r.amax();
    let mut it = 0;
    while norm > opts.tol {
        if it == opts.max_iter {
            return Err(Error::NoConvergence {
                iterations: it,
                residual: norm,
            });
        }
        it += 1;
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            let h = opts.fd_step * (1.0 + x[k].abs());
            let mut xp = x.clone();
            xp[k] += h;
            let col = match f(&xp) {
                Ok(rp) => (rp - &r) / (xp[k] - x[k]),
                Err(_) => {
                    let mut xm = x.clone();
                    xm[k] -= h;
                    (&r - f(&xm)?) / (x[k] - xm[k])
                }
            };
            jac.set_column(k, &col);
        }
        let step = jac.lu().solve(&(-&r)).ok_or(Error::NoConvergence {
            iterations: it,
            residual: norm,
        })?;
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..=opts.max_halvings {
            let trial = &x + &step * scale;
            if let Ok(rt) = f(&trial) {
                let nt = rt.amax();
                if nt < norm || nt <= opts.tol {
                    x = trial;
                    r = rt;
                    norm = nt;
                    accepted = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence {
                iterations: it,
                residual: norm,
            });
        }
    }
    Ok(NewtonResult {
        x,
        residual: norm,
        iterations: it,
    })
}

pub(crate) fn split<const M: usize>(x: &DVector<f64>) -> (State<M>, State<M>) {
    (State::<M>::from_fn(|i, _| x[i]), State::<M>::from_fn(|i, _| x[M + i]))
}

pub(crate) fn join<const M: usize>(a: &State<M>, b: &State<M>) -> DVector<f64> {
    DVector::from_iterator(2 * M, a.iter().chain(b.iter()).copied())
}
