//! Nonconservative systems `∂ₜU + A(U)∂ₓU = S(U)` and their diagnostics.

mod blood;
pub mod diagnostics;
mod linear;
mod swe;

pub use blood::{blood_closed_path_integral, BloodVessel};
pub use diagnostics::{flux_jacobian_defect, m_term, matrix_partials, spectral_radius, subchar_check, SubcharReport};
pub use linear::LinearModel;
pub use swe::TwoLayerSwe;

use crate::error::{Error, Result};
use crate::{Matrix, State};

/// A one-dimensional nonconservative hyperbolic system.
///
/// Every method that evaluates the system at a state rejects states outside
/// the admissible set with [`Error::NonAdmissibleState`].
pub trait SystemModel<const M: usize>: Send + Sync {
    fn name(&self) -> String;

    fn admissible(&self, u: &State<M>) -> bool;

    /// The system matrix `A(U)`.
    fn matrix(&self, u: &State<M>) -> Result<Matrix<M>>;

    /// An upper bound on the spectral radius of `A(U)`.
    fn max_speed(&self, u: &State<M>) -> Result<f64>;

    /// Whether `A = DF` for a flux available through [`SystemModel::flux`].
    fn is_conservative(&self) -> bool {
        false
    }

    fn flux(&self, u: &State<M>) -> Result<State<M>> {
        let _ = u;
        Err(Error::InvalidParam(format!("{} has no flux function", self.name())))
    }

    fn has_source(&self) -> bool {
        false
    }

    /// Right-hand side `S(U)`; zero unless overridden.
    fn source(&self, u: &State<M>) -> Result<State<M>> {
        self.check(u)?;
        Ok(State::<M>::zeros())
    }

    /// Exact segment-path integral `∫₀¹ A(U₁ + s(U₂−U₁))(U₂−U₁) ds`, when known.
    fn closed_form_path_integral(&self, from: &State<M>, to: &State<M>) -> Option<Result<State<M>>> {
        let _ = (from, to);
        None
    }

    fn check(&self, u: &State<M>) -> Result<()> {
        if u.iter().all(|x| x.is_finite()) && self.admissible(u) {
            Ok(())
        } else {
            Err(Error::non_admissible(u.as_slice()))
        }
    }
}

impl<const M: usize, T: SystemModel<M> + ?Sized> SystemModel<M> for &T {
    fn name(&self) -> String {
        (**self).name()
    }
    fn admissible(&self, u: &State<M>) -> bool {
        (**self).admissible(u)
    }
    fn matrix(&self, u: &State<M>) -> Result<Matrix<M>> {
        (**self).matrix(u)
    }
    fn max_speed(&self, u: &State<M>) -> Result<f64> {
        (**self).max_speed(u)
    }
    fn is_conservative(&self) -> bool {
        (**self).is_conservative()
    }
    fn flux(&self, u: &State<M>) -> Result<State<M>> {
        (**self).flux(u)
    }
    fn has_source(&self) -> bool {
        (**self).has_source()
    }
    fn source(&self, u: &State<M>) -> Result<State<M>> {
        (**self).source(u)
    }
    fn closed_form_path_integral(&self, from: &State<M>, to: &State<M>) -> Option<Result<State<M>>> {
        (**self).closed_form_path_integral(from, to)
    }
}
