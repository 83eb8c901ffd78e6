use std::f64::consts::FRAC_PI_2;

use nalgebra::vector;

use crate::error::Result;
use crate::models::{BloodVessel, SystemModel};
use crate::schemes::GhostProvider;
use crate::State;

/// Boundary state for a prescribed pressure `p` at an inflow end.
///
/// The area follows from the pressure law, `a_b = (√a₀ + p/β)²`; the velocity from
/// the outgoing Riemann invariant `W₋ = u − 4c(a)` of the conservative system,
/// extrapolated from the interior: `u_b = W₋(interior) + 4c(a_b)`.
pub fn blood_inflow(pressure: f64, interior: &State<2>, vessel: &BloodVessel) -> Result<State<2>> {
    vessel.check(interior)?;
    let a_b = vessel.area_from_pressure(pressure)?;
    let w_minus = interior[1] - 4.0 * vessel.celerity(interior[0]);
    Ok(vector![a_b, w_minus + 4.0 * vessel.celerity(a_b)])
}

/// Heart-like pressure pulse `P_v(t) = P₀ sin(π/2 (t − ½))` at the left end of a vessel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseInflow {
    pub vessel: BloodVessel,
    pub amplitude: f64,
}

impl PulseInflow {
    pub const DEFAULT_AMPLITUDE: f64 = 2e-3;

    pub fn new(vessel: BloodVessel) -> Self {
        PulseInflow {
            vessel,
            amplitude: Self::DEFAULT_AMPLITUDE,
        }
    }

    pub fn pressure(&self, t: f64) -> f64 {
        self.amplitude * (FRAC_PI_2 * (t - 0.5)).sin()
    }
}

impl GhostProvider<2> for PulseInflow {
    fn ghost(&self, t: f64, interior: &State<2>) -> Result<State<2>> {
        blood_inflow(self.pressure(t), interior, &self.vessel)
    }

    fn describe(&self) -> String {
        format!("pressure pulse {} sin(pi/2 (t - 1/2))", self.amplitude)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vessel() -> BloodVessel {
        BloodVessel::new(1.0, 0.005 * std::f64::consts::PI.sqrt())
    }

    #[test]
    fn rest_state_is_reproduced() {
        let b = blood_inflow(0.0, &vector![5.0, 0.0], &vessel()).unwrap();
        assert!((b - vector![5.0, 0.0]).amax() < 1e-15);
    }

    #[test]
    fn peak_pressure_values() {
        let v = vessel();
        let b = blood_inflow(2e-3, &vector![5.0, 0.0], &v).unwrap();
        let root: f64 = 5f64.sqrt() + 2e-3 / v.beta;
        assert!((b[0] - root * root).abs() < 1e-13);
        assert!((b[0] - 6.0602).abs() < 1e-4);
        let c = |a: f64| (v.beta / 2.0).sqrt() * a.powf(0.25);
        assert!((b[1] - 4.0 * (c(b[0]) - c(5.0))).abs() < 1e-15);
        assert!((b[1] - 0.019609).abs() < 1e-5, "{}", b[1]);
    }

    #[test]
    fn pulse_shape() {
        let p = PulseInflow::new(vessel());
        assert!(p.pressure(0.5).abs() < 1e-18);
        assert!((p.pressure(1.5) - 2e-3).abs() < 1e-18);
        assert!((p.pressure(0.0) + 2e-3 / 2f64.sqrt()).abs() < 1e-18);
    }
}
