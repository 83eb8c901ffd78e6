use super::{spectral_radius, SystemModel};
use crate::error::{Error, Result};
use crate::{Matrix, State};

/// Constant-coefficient system `∂ₜU + A ∂ₓU = 0`, conservative with `F(U) = A U`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearModel<const M: usize> {
    matrix: Matrix<M>,
    speed: f64,
}

impl<const M: usize> LinearModel<M> {
    pub fn new(matrix: Matrix<M>) -> Result<Self> {
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParam("linear model matrix must be finite".into()));
        }
        Ok(LinearModel {
            speed: spectral_radius(&matrix),
            matrix,
        })
    }

    pub fn coefficients(&self) -> &Matrix<M> {
        &self.matrix
    }
}

impl<const M: usize> SystemModel<M> for LinearModel<M> {
    fn name(&self) -> String {
        format!("linear{M}")
    }

    fn admissible(&self, _u: &State<M>) -> bool {
        true
    }

    fn matrix(&self, u: &State<M>) -> Result<Matrix<M>> {
        self.check(u)?;
        Ok(self.matrix)
    }

    fn max_speed(&self, u: &State<M>) -> Result<f64> {
        self.check(u)?;
        Ok(self.speed)
    }

    fn is_conservative(&self) -> bool {
        true
    }

    fn flux(&self, u: &State<M>) -> Result<State<M>> {
        self.check(u)?;
        Ok(self.matrix * u)
    }

    fn closed_form_path_integral(&self, from: &State<M>, to: &State<M>) -> Option<Result<State<M>>> {
        Some(
            self.check(from)
                .and_then(|_| self.check(to))
                .map(|_| self.matrix * (to - from)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{matrix, vector};

    #[test]
    fn speed_is_spectral_radius() {
        let m = LinearModel::new(matrix![0.0, 1.0; 4.0, 0.0]).unwrap();
        assert!((m.max_speed(&vector![0.0, 0.0]).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(
            m.closed_form_path_integral(&vector![1.0, 0.0], &vector![1.0, 2.0])
                .unwrap()
                .unwrap(),
            vector![2.0, 0.0]
        );
    }
}
