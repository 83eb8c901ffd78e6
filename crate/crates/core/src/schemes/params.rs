use crate::error::{Error, Result};
use crate::State;

/// `Δt = CFL · Δx / √μ`.
pub fn cfl_dt(dx: f64, mu: f64, cfl: f64) -> Result<f64> {
    if !(dx > 0.0) || !dx.is_finite() {
        return Err(Error::InvalidParam(format!("dx must be positive, got {dx}")));
    }
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidParam(format!("mu must be positive, got {mu}")));
    }
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::InvalidParam(format!("CFL number must lie in (0, 1], got {cfl}")));
    }
    Ok(cfl * dx / mu.sqrt())
}

/// Relaxation matrix `Λ = diag(λ₁ … λ_M)`, relaxation rate and Courant number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationParams<const M: usize> {
    pub lambda: State<M>,
    /// Only used by the finite-ε relaxation scheme.
    pub epsilon: Option<f64>,
    pub cfl: f64,
}

impl<const M: usize> RelaxationParams<M> {
    /// `Λ = μI`.
    pub fn with_mu(mu: f64, cfl: f64) -> Result<Self> {
        Self::new(State::<M>::repeat(mu), cfl)
    }

    pub fn new(lambda: State<M>, cfl: f64) -> Result<Self> {
        let p = RelaxationParams {
            lambda,
            epsilon: None,
            cfl,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidParam(format!("epsilon must be positive, got {epsilon}")));
        }
        self.epsilon = Some(epsilon);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
            return Err(Error::InvalidParam(format!(
                "relaxation matrix entries must be positive, got {:?}",
                self.lambda.as_slice()
            )));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidParam(format!(
                "CFL number must lie in (0, 1], got {}",
                self.cfl
            )));
        }
        Ok(())
    }

    pub fn sqrt_lambda(&self) -> State<M> {
        self.lambda.map(f64::sqrt)
    }

    pub fn max_lambda(&self) -> f64 {
        self.lambda.max()
    }

    /// Smallest `λᵢ`, the bound the squared wave speeds must stay under.
    pub fn min_lambda(&self) -> f64 {
        self.lambda.min()
    }

    pub fn dt(&self, dx: f64) -> Result<f64> {
        cfl_dt(dx, self.max_lambda(), self.cfl)
    }

    pub(crate) fn check_dt(&self, dx: f64, dt: f64) -> Result<()> {
        let limit = self.dt(dx)?;
        if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
            return Err(Error::CflViolation { dt, limit });
        }
        Ok(())
    }
}
