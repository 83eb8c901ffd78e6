use std::f64::consts::PI;

use nalgebra::{matrix, vector};

use super::SystemModel;
use crate::error::{Error, Result};
use crate::{Matrix, State};

/// Reduced 1D model of an elastic vessel, state `(a, u)` (section area, axial velocity).
///
/// Pressure law `p = β(√a − √a₀)`, friction source `(0, −K_R u/a)`. The system is
/// conservative only for the Coriolis coefficient `α = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BloodVessel {
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub k_r: f64,
    pub a0: f64,
}

impl BloodVessel {
    pub const DEFAULT_A0: f64 = 5.0;
    pub const DEFAULT_K_R: f64 = 8.0 * PI * 1e-4;

    /// Vessel with the given `α` and `β`, `ρ = 1`, `K_R = 8π·10⁻⁴`, `a₀ = 5`.
    pub fn new(alpha: f64, beta: f64) -> Self {
        BloodVessel {
            alpha,
            beta,
            rho: 1.0,
            k_r: Self::DEFAULT_K_R,
            a0: Self::DEFAULT_A0,
        }
    }

    /// `β = E h₀ √π / a₀` from Young's modulus `E` and wall thickness `h₀`.
    pub fn from_wall(alpha: f64, young: f64, thickness: f64, a0: f64) -> Result<Self> {
        if !(young > 0.0 && thickness > 0.0 && a0 > 0.0) {
            return Err(Error::InvalidParam(format!(
                "vessel needs E, h₀, a₀ > 0, got {young}, {thickness}, {a0}"
            )));
        }
        let mut v = Self::new(alpha, young * thickness * PI.sqrt() / a0);
        v.a0 = a0;
        Ok(v)
    }

    pub fn with_friction(mut self, k_r: f64) -> Self {
        self.k_r = k_r;
        self
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.alpha.is_finite()
            && self.beta > 0.0
            && self.rho > 0.0
            && self.a0 > 0.0
            && self.k_r >= 0.0
            && self.beta.is_finite()
            && self.k_r.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParam(format!("invalid vessel parameters {self:?}")))
        }
    }

    pub fn pressure(&self, a: f64) -> Result<f64> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::non_admissible(&[a]));
        }
        Ok(self.beta * (a.sqrt() - self.a0.sqrt()))
    }

    /// Inverse of [`BloodVessel::pressure`]: `a = (√a₀ + p/β)²`.
    pub fn area_from_pressure(&self, p: f64) -> Result<f64> {
        let root = self.a0.sqrt() + p / self.beta;
        if !(root > 0.0) || !root.is_finite() {
            return Err(Error::non_admissible(&[p]));
        }
        Ok(root * root)
    }

    /// `c(a) = √(β/(2ρ)) a^{1/4}`, the wave celerity of the `α = 1` system.
    pub fn celerity(&self, a: f64) -> f64 {
        (self.beta / (2.0 * self.rho)).sqrt() * a.sqrt().sqrt()
    }

    /// Flow rate `Q = a u`.
    pub fn flow_rate(u: &State<2>) -> f64 {
        u[0] * u[1]
    }
}

impl SystemModel<2> for BloodVessel {
    fn name(&self) -> String {
        format!("blood-vessel(alpha={}, beta={})", self.alpha, self.beta)
    }

    fn admissible(&self, u: &State<2>) -> bool {
        u[0] > 0.0
    }

    fn matrix(&self, u: &State<2>) -> Result<Matrix<2>> {
        self.check(u)?;
        let (a, v) = (u[0], u[1]);
        let al = self.alpha;
        Ok(matrix![
            v, a;
            (al - 1.0) * v * v + self.beta / (2.0 * self.rho * a.sqrt()), (2.0 * al - 1.0) * v
        ])
    }

    /// Exact spectral radius `|α u| + √((α−1)²u² + (α−1)a u² + β√a/(2ρ))`.
    fn max_speed(&self, u: &State<2>) -> Result<f64> {
        self.check(u)?;
        let (a, v) = (u[0], u[1]);
        let am1 = self.alpha - 1.0;
        let disc = am1 * am1 * v * v + am1 * a * v * v + self.beta * a.sqrt() / (2.0 * self.rho);
        Ok((self.alpha * v).abs() + disc.max(0.0).sqrt())
    }

    fn is_conservative(&self) -> bool {
        self.alpha == 1.0
    }

    /// `F(U) = (a u, u²/2 + p(a)/ρ)` for `α = 1`.
    fn flux(&self, u: &State<2>) -> Result<State<2>> {
        if !self.is_conservative() {
            return Err(Error::InvalidParam(format!(
                "blood model with alpha = {} has no flux function",
                self.alpha
            )));
        }
        self.check(u)?;
        Ok(vector![
            u[0] * u[1],
            0.5 * u[1] * u[1] + self.pressure(u[0])? / self.rho
        ])
    }

    fn has_source(&self) -> bool {
        self.k_r != 0.0
    }

    fn source(&self, u: &State<2>) -> Result<State<2>> {
        self.check(u)?;
        Ok(vector![0.0, -self.k_r * u[1] / u[0]])
    }

    fn closed_form_path_integral(&self, from: &State<2>, to: &State<2>) -> Option<Result<State<2>>> {
        Some(blood_closed_path_integral(from, to, self.alpha, self.beta, self.rho))
    }
}

/// Segment-path integral of the vessel matrix between `U₁ = (a₁, u₁)` and `U₂ = (a₂, u₂)`.
///
/// The cubic difference quotient `(u₂³ − u₁³)/(u₂ − u₁)` is evaluated as
/// `u₂² + u₁u₂ + u₁²` so equal velocities need no special case.
pub fn blood_closed_path_integral(from: &State<2>, to: &State<2>, alpha: f64, beta: f64, rho: f64) -> Result<State<2>> {
    let (a1, u1) = (from[0], from[1]);
    let (a2, u2) = (to[0], to[1]);
    if !(a1 > 0.0 && a2 > 0.0) || !(u1.is_finite() && u2.is_finite()) {
        let bad = if a1 > 0.0 { to } else { from };
        return Err(Error::non_admissible(bad.as_slice()));
    }
    let da = a2 - a1;
    let mass = 0.5 * ((u2 + u1) * da + (a2 + a1) * (u2 - u1));
    let momentum = (alpha - 1.0) / 3.0 * (u2 * u2 + u1 * u2 + u1 * u1) * da
        + beta / rho * (a2.sqrt() - a1.sqrt())
        + 0.5 * (2.0 * alpha - 1.0) * (u2 * u2 - u1 * u1);
    Ok(vector![mass, momentum])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::path_integral;
    use crate::quadrature::gauss_lobatto_5;
    use crate::SegmentPath;

    fn beta1() -> f64 {
        0.005 * PI.sqrt()
    }

    #[test]
    fn beta_from_wall_parameters() {
        let v = BloodVessel::from_wall(1.0, 0.5, 0.05, 5.0).unwrap();
        assert!((v.beta - beta1()).abs() < 1e-16);
        let v2 = BloodVessel::from_wall(1.0, 0.1, 0.05, 5.0).unwrap();
        assert!((v2.beta - 0.001 * PI.sqrt()).abs() < 1e-16);
        assert!(BloodVessel::from_wall(1.0, -0.1, 0.05, 5.0).is_err());
    }

    #[test]
    fn matrix_at_rest() {
        let v = BloodVessel::new(1.0, beta1());
        let a = v.matrix(&vector![5.0, 0.0]).unwrap();
        let low = beta1() / (2.0 * 5f64.sqrt());
        assert!((low - 1.9816e-3).abs() < 1e-7);
        assert_eq!(a[(0, 0)], 0.0);
        assert_eq!(a[(0, 1)], 5.0);
        assert!((a[(1, 0)] - low).abs() < 1e-18);
        assert_eq!(a[(1, 1)], 0.0);
        let p = BloodVessel::new(4.0 / 3.0, beta1()).matrix(&vector![3.0, 0.0]).unwrap();
        assert_eq!(p[(1, 1)], 0.0);
    }

    #[test]
    fn pressure_law() {
        let v = BloodVessel::new(1.0, beta1());
        assert_eq!(v.pressure(5.0).unwrap(), 0.0);
        let a = v.area_from_pressure(2e-3).unwrap();
        let expected = (5f64.sqrt() + 2e-3 / beta1()).powi(2);
        assert!((a - expected).abs() < 1e-14);
        assert!((a - 6.0602).abs() < 1e-4, "{a}");
        assert!(v.pressure(0.0).is_err());
        assert!(v.area_from_pressure(-beta1() * 5f64.sqrt()).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let z = blood_closed_path_integral(&vector![4.0, 0.3], &vector![4.0, 0.3], 4.0 / 3.0, 0.01, 1.0).unwrap();
        assert_eq!(z, State::<2>::zeros());
        let r = blood_closed_path_integral(&vector![5.0, 0.0], &vector![5.0, 0.1], 1.0, beta1(), 1.0).unwrap();
        assert!((r[0] - 0.5).abs() < 1e-15);
        assert!((r[1] - 0.005).abs() < 1e-15);
    }

    #[test]
    fn closed_form_agrees_with_quadrature_nonconservative() {
        let v = BloodVessel::new(4.0 / 3.0, beta1());
        let u1 = vector![4.2, 0.35];
        let u2 = vector![6.1, -0.2];
        let exact = v.closed_form_path_integral(&u1, &u2).unwrap().unwrap();
        let quad = path_integral(|u| v.matrix(u), &SegmentPath, &u1, &u2, &gauss_lobatto_5()).unwrap();
        for k in 0..2 {
            assert!((exact[k] - quad[k]).abs() <= 1e-6 * exact[k].abs().max(1e-12), "{k}");
        }
    }

    #[test]
    fn spectral_radius_from_quadratic_formula() {
        // Eigenvalues of [[u, a], [c, d]] via the quadratic formula.
        let v = BloodVessel::new(4.0 / 3.0, beta1());
        for s in [vector![5.0, 0.0], vector![3.0, 0.2], vector![7.0, -0.4]] {
            let m = v.matrix(&s).unwrap();
            let tr = m[(0, 0)] + m[(1, 1)];
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            let disc = (tr * tr / 4.0 - det).sqrt();
            let rho = (tr / 2.0 + disc).abs().max((tr / 2.0 - disc).abs());
            assert!((v.max_speed(&s).unwrap() - rho).abs() < 1e-12);
        }
        let rest = BloodVessel::new(1.0, beta1()).max_speed(&vector![5.0, 0.0]).unwrap();
        assert!((rest - 0.0995).abs() < 1e-4, "{rest}");
    }

    #[test]
    fn friction_source() {
        let v = BloodVessel::new(1.0, beta1());
        let s = v.source(&vector![5.0, 1.0]).unwrap();
        assert_eq!(s[0], 0.0);
        assert!((s[1] + 8.0 * PI * 1e-4 / 5.0).abs() < 1e-18);
        assert!(v.source(&vector![0.0, 1.0]).is_err());
        assert!(v.flux(&vector![5.0, 0.0]).is_ok());
        assert!(BloodVessel::new(4.0 / 3.0, 0.01).flux(&vector![5.0, 0.0]).is_err());
    }
}
