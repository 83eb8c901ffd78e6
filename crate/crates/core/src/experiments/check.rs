use nalgebra::vector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::models::{m_term, subchar_check, BloodVessel, SystemModel, TwoLayerSwe};
use crate::paths::PathIntegrator;
use crate::schemes::fluctuations;
use crate::State;

use super::config::{ModelChoice, Preset, RunConfig};
use super::presets::{blood_coupled, swe_initial};

/// Outcome of one invariant check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

const SEED: u64 = 0x5eed_2024;

/// Random two-layer states with heights in `[0.1, 2]` and `|q| ≤ 0.5`.
pub fn random_swe_states(n: usize, seed: u64) -> Vec<State<4>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            vector![
                rng.random_range(0.1..2.0),
                rng.random_range(-0.5..0.5),
                rng.random_range(0.1..2.0),
                rng.random_range(-0.5..0.5)
            ]
        })
        .collect()
}

/// Random vessel states with `a ∈ [3, 8]`, `|u| ≤ 0.1`.
pub fn random_blood_states(n: usize, seed: u64) -> Vec<State<2>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| vector![rng.random_range(3.0..8.0), rng.random_range(-0.1..0.1)])
        .collect()
}

/// Largest violation of `D⁻ + D⁺ = ∫A dΦ`, relative to the size of the terms,
/// and whether `D∓(U, U) = 0` held exactly, over consecutive pairs of `states`.
pub fn phi_conservativity_defect<const M: usize, S: SystemModel<M>>(
    model: &S,
    paths: &PathIntegrator<M>,
    sqrt_lambda: &State<M>,
    states: &[State<M>],
) -> Result<(f64, bool)> {
    let mut worst: f64 = 0.0;
    let mut zero_at_equal = true;
    for w in states.windows(2) {
        let (dm, dp) = fluctuations(model, paths, sqrt_lambda, &w[0], &w[1])?;
        let b = paths.integrate(model, &w[0], &w[1])?;
        let scale = 1f64.max(b.amax()).max(dm.amax()).max(dp.amax());
        worst = worst.max((dm + dp - b).amax() / scale);
        let (zm, zp) = fluctuations(model, paths, sqrt_lambda, &w[0], &w[0])?;
        zero_at_equal &= zm == State::<M>::zeros() && zp == State::<M>::zeros();
    }
    Ok((worst, zero_at_equal))
}

/// Largest `|M(U)(∂ₓU)∂ₓU|` over random states and gradients.
pub fn max_m_term<const M: usize, S: SystemModel<M>>(model: &S, states: &[State<M>]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for w in states.windows(2) {
        let grad = w[1] - w[0];
        worst = worst.max(m_term(model, &w[0], &grad)?.amax());
    }
    Ok(worst)
}

/// Subcharacteristic bound on the initial data of the preset, the
/// Φ-conservativity identity of the relaxed fluctuations, and the vanishing of
/// the M-term for the conservative blood model.
pub fn check(cfg: &RunConfig) -> Result<Vec<CheckOutcome>> {
    cfg.validate()?;
    let mut out = Vec::new();

    let report = match (cfg.preset, cfg.model) {
        (Preset::BloodCoupled, _) => {
            let (d, l, r) = blood_coupled(cfg, cfg.n_cells)?;
            // The peak inflow state bounds the speeds the pulse produces.
            let peak = crate::coupling::blood_inflow(cfg.amplitude, &l.u[0], &d.left)?;
            let mut a = subchar_check(&d.left, cfg.mu_left, &[l.u.clone(), vec![peak]].concat());
            let b = subchar_check(&d.right, cfg.mu_right, &r.u);
            if b.worst_margin < a.worst_margin {
                a = b;
            }
            a
        }
        (Preset::Custom, ModelChoice::Blood) => {
            let v = BloodVessel::from_wall(cfg.alpha, cfg.young_left, cfg.thickness, cfg.a0)?;
            let s = [
                State::<2>::from_column_slice(&cfg.left_state),
                State::<2>::from_column_slice(&cfg.right_state),
            ];
            subchar_check(&v, cfg.mu_left, &s)
        }
        _ => subchar_check(&TwoLayerSwe::default(), cfg.mu_left, &swe_initial(cfg, cfg.n_cells)?.u),
    };
    out.push(CheckOutcome {
        name: "subchar_check",
        passed: report.passed,
        detail: format!(
            "mu = {}, max squared speed {:.6e}, margin {:.6e}",
            report.mu, report.worst_speed_sq, report.worst_margin
        ),
    });

    let swe = TwoLayerSwe::default();
    let (defect, zero) = phi_conservativity_defect(
        &swe,
        &PathIntegrator::segment(),
        &State::<4>::repeat(5.0),
        &random_swe_states(1000, SEED),
    )?;
    out.push(CheckOutcome {
        name: "phi_conservativity",
        passed: defect <= 1e-14 && zero,
        detail: format!("max relative defect {defect:.3e} over 999 SWE pairs, D(U,U) = 0: {zero}"),
    });

    let beta = 0.5 * 0.05 * std::f64::consts::PI.sqrt() / 5.0;
    let states = random_blood_states(200, SEED + 1);
    let m1 = max_m_term(&BloodVessel::new(1.0, beta), &states)?;
    let m43 = max_m_term(&BloodVessel::new(4.0 / 3.0, beta), &states)?;
    out.push(CheckOutcome {
        name: "m_vanishing",
        passed: m1 <= 1e-5,
        detail: format!("max |M| = {m1:.3e} for alpha = 1 (alpha = 4/3: {m43:.3e})"),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_on_presets() {
        for p in [Preset::SweSmooth, Preset::SweDambreak, Preset::BloodCoupled] {
            let cfg = RunConfig {
                n_cells: 50,
                ..RunConfig::preset(p)
            };
            for c in check(&cfg).unwrap() {
                assert!(c.passed, "{p}: {} {}", c.name, c.detail);
            }
        }
    }

    #[test]
    fn too_small_mu_fails_subchar() {
        let cfg = RunConfig {
            n_cells: 50,
            mu_left: 1.0,
            ..RunConfig::preset(Preset::SweSmooth)
        };
        assert!(!check(&cfg).unwrap()[0].passed);
    }

    #[test]
    fn samples_are_reproducible() {
        assert_eq!(random_swe_states(5, 3), random_swe_states(5, 3));
        assert_ne!(random_swe_states(5, 3), random_swe_states(5, 4));
    }
}
