use nalgebra::matrix;

use super::SystemModel;
use crate::error::{Error, Result};
use crate::{Matrix, State};

/// Two superimposed shallow layers over a flat bottom, state `(h₁, q₁, h₂, q₂)`.
///
/// Layer 1 is the upper (lighter) layer; `r = ρ₁/ρ₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLayerSwe {
    pub g: f64,
    pub r: f64,
}

impl Default for TwoLayerSwe {
    fn default() -> Self {
        TwoLayerSwe { g: 9.81, r: 0.9 }
    }
}

impl TwoLayerSwe {
    pub fn new(g: f64, r: f64) -> Result<Self> {
        if !(g > 0.0) || !(r > 0.0) || !g.is_finite() || !r.is_finite() {
            return Err(Error::InvalidParam(format!(
                "two-layer SWE needs g > 0 and r > 0, got g = {g}, r = {r}"
            )));
        }
        Ok(TwoLayerSwe { g, r })
    }
}

impl SystemModel<4> for TwoLayerSwe {
    fn name(&self) -> String {
        "two-layer-swe".into()
    }

    fn admissible(&self, u: &State<4>) -> bool {
        u[0] > 0.0 && u[2] > 0.0
    }

    fn matrix(&self, u: &State<4>) -> Result<Matrix<4>> {
        self.check(u)?;
        let (h1, q1, h2, q2) = (u[0], u[1], u[2], u[3]);
        let (v1, v2) = (q1 / h1, q2 / h2);
        let g = self.g;
        Ok(matrix![
            0.0, 1.0, 0.0, 0.0;
            -v1 * v1 + g * h1, 2.0 * v1, g * h1, 0.0;
            0.0, 0.0, 0.0, 1.0;
            self.r * g * h2, 0.0, -v2 * v2 + g * h2, 2.0 * v2
        ])
    }

    /// `|q₁ + q₂|/(h₁ + h₂) + √(g(h₁ + h₂))`, the usual estimate of the
    /// external (barotropic) wave speed.
    fn max_speed(&self, u: &State<4>) -> Result<f64> {
        self.check(u)?;
        let h = u[0] + u[2];
        Ok((u[1] + u[3]).abs() / h + (self.g * h).sqrt())
    }
}
