//! Consistency and stability diagnostics for [`SystemModel`]s.

use nalgebra::DMatrix;

use super::SystemModel;
use crate::error::Result;
use crate::{Matrix, State};

/// Largest eigenvalue modulus of a dense matrix.
pub fn spectral_radius<const M: usize>(a: &Matrix<M>) -> f64 {
    let dense = DMatrix::from_iterator(M, M, a.iter().copied());
    dense.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn fd_step(x: f64) -> f64 {
    1e-6 * x.abs().max(1.0)
}

/// Central finite-difference partials `∂ₗA(U)`, one matrix per component `ℓ`.
pub fn matrix_partials<const M: usize, S>(model: &S, u: &State<M>) -> Result<[Matrix<M>; M]>
where
    S: SystemModel<M> + ?Sized,
{
    model.check(u)?;
    let mut out = [Matrix::<M>::zeros(); M];
    for (l, d) in out.iter_mut().enumerate() {
        let h = fd_step(u[l]);
        let mut up = *u;
        let mut dn = *u;
        up[l] += h;
        dn[l] -= h;
        *d = (model.matrix(&up)? - model.matrix(&dn)?) / (up[l] - dn[l]);
    }
    Ok(out)
}

/// The first-order correction `M(U)(∂ₓU)∂ₓU` of the relaxation limit,
/// component `k = Σ_{i,j,ℓ} ∂ₓUⁱ ∂ₓUʲ a_{ℓi}(∂ⱼa_{kℓ} − ∂ℓa_{kj})`.
///
/// Vanishes identically for conservative systems.
pub fn m_term<const M: usize, S>(model: &S, u: &State<M>, dxu: &State<M>) -> Result<State<M>>
where
    S: SystemModel<M> + ?Sized,
{
    let a = model.matrix(u)?;
    if dxu.iter().all(|&d| d == 0.0) {
        return Ok(State::<M>::zeros());
    }
    let da = matrix_partials(model, u)?;
    let mut out = State::<M>::zeros();
    for k in 0..M {
        let mut acc = 0.0;
        for i in 0..M {
            for j in 0..M {
                let w = dxu[i] * dxu[j];
                if w == 0.0 {
                    continue;
                }
                for l in 0..M {
                    acc += w * a[(l, i)] * (da[j][(k, l)] - da[l][(k, j)]);
                }
            }
        }
        out[k] = acc;
    }
    Ok(out)
}

/// Max-norm distance between `A(U)` and the finite-difference Jacobian of the flux.
pub fn flux_jacobian_defect<const M: usize, S>(model: &S, u: &State<M>) -> Result<f64>
where
    S: SystemModel<M> + ?Sized,
{
    let a = model.matrix(u)?;
    let mut jac = Matrix::<M>::zeros();
    for l in 0..M {
        let h = fd_step(u[l]);
        let mut up = *u;
        let mut dn = *u;
        up[l] += h;
        dn[l] -= h;
        let col = (model.flux(&up)? - model.flux(&dn)?) / (up[l] - dn[l]);
        jac.set_column(l, &col);
    }
    Ok((a - jac).amax())
}

/// Outcome of checking `μ ≥ max_speed(U)²` over sample states.
#[derive(Debug, Clone, PartialEq)]
pub struct SubcharReport {
    pub passed: bool,
    pub mu: f64,
    /// `μ − max_speed²` at the worst sample (negative on failure).
    pub worst_margin: f64,
    pub worst_speed_sq: f64,
    pub worst_index: Option<usize>,
    /// Samples that could not be evaluated (non-admissible).
    pub rejected: Vec<usize>,
}

/// Check the subcharacteristic bound `μ ≥ max_speed(U)²` with `Λ = μI`.
pub fn subchar_check<const M: usize, S>(model: &S, mu: f64, samples: &[State<M>]) -> SubcharReport
where
    S: SystemModel<M> + ?Sized,
{
    let mut worst: Option<(usize, f64)> = None;
    let mut rejected = Vec::new();
    for (i, u) in samples.iter().enumerate() {
        match model.max_speed(u) {
            Ok(c) => {
                let sq = c * c;
                if worst.is_none_or(|(_, w)| sq > w) {
                    worst = Some((i, sq));
                }
            }
            Err(_) => rejected.push(i),
        }
    }
    let worst_speed_sq = worst.map_or(0.0, |(_, w)| w);
    let worst_margin = mu - worst_speed_sq;
    SubcharReport {
        passed: rejected.is_empty() && worst_margin >= 0.0 && !(mu == 0.0 && worst_speed_sq > 0.0),
        mu,
        worst_margin,
        worst_speed_sq,
        worst_index: worst.map(|(i, _)| i),
        rejected,
    }
}
