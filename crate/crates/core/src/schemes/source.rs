use crate::error::Result;
use crate::grid::GridSolution;
use crate::models::SystemModel;

/// Explicit Euler on the source, `Uⱼ ← Uⱼ + Δt S(Uⱼ)`; the identity for models
/// without a source. `V` is left untouched.
pub fn source_step<const M: usize, S>(model: &S, dt: f64, sol: &mut GridSolution<M>) -> Result<()>
where
    S: SystemModel<M> + ?Sized,
{
    if !model.has_source() {
        return Ok(());
    }
    for (j, u) in sol.u.iter_mut().enumerate() {
        let next = *u + model.source(u).map_err(|e| e.at(Some(j), Some(sol.time)))? * dt;
        model.check(&next).map_err(|e| e.at(Some(j), Some(sol.time)))?;
        *u = next;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;
    use crate::models::BloodVessel;
    use nalgebra::vector;

    #[test]
    fn friction_decay() {
        let v = BloodVessel::new(1.0, 0.01);
        let mut sol = GridSolution::new(Grid1D::over(0.0, 1.0, 1).unwrap(), vec![vector![5.0, 1.0]]).unwrap();
        source_step(&v, 1e-3, &mut sol).unwrap();
        let want = 1.0 - 1e-3 * 8.0 * std::f64::consts::PI * 1e-4 / 5.0;
        assert!((sol.u[0][1] - want).abs() < 1e-15);
        assert!((sol.u[0][1] - 0.99999949736).abs() < 1e-10);
        assert_eq!(sol.u[0][0], 5.0);
    }

    #[test]
    fn identity_cases() {
        let grid = Grid1D::over(0.0, 1.0, 3).unwrap();
        let mut sol = GridSolution::from_fn(grid, |_| vector![5.0, 0.0]);
        let before = sol.clone();
        source_step(&BloodVessel::new(1.0, 0.01), 0.1, &mut sol).unwrap();
        assert_eq!(sol, before);
        let mut sol = GridSolution::from_fn(grid, |_| vector![5.0, 0.3]);
        let before = sol.clone();
        source_step(&BloodVessel::new(1.0, 0.01).with_friction(0.0), 0.1, &mut sol).unwrap();
        assert_eq!(sol, before);
    }
}
