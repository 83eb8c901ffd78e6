use approx::assert_relative_eq;
use nalgebra::vector;
use proptest::prelude::*;

use ncrelax::coupling::{CoupledDomain, RiemannSolverKind};
use ncrelax::experiments::{eoc, l1_error, Preset, RunConfig};
use ncrelax::schemes::{fluctuations, relaxed_step, BoundarySpec, RelaxationParams};
use ncrelax::{
    BloodVessel, Grid1D, GridSolution, PathFamily, PathIntegrator, SegmentPath, State, SystemModel, TwoLayerSwe,
};

fn swe_state() -> impl Strategy<Value = State<4>> {
    (0.1..2.0f64, -0.5..0.5f64, 0.1..2.0f64, -0.5..0.5f64).prop_map(|(a, b, c, d)| vector![a, b, c, d])
}

fn blood_state() -> impl Strategy<Value = State<2>> {
    (4.0..6.5f64, -0.05..0.05f64).prop_map(|(a, u)| vector![a, u])
}

fn beta(young: f64) -> f64 {
    young * 0.05 * std::f64::consts::PI.sqrt() / 5.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn segment_endpoints_are_exact(a in swe_state(), b in swe_state(), s in 0.0..1.0f64) {
        prop_assert_eq!(SegmentPath.point(0.0, &a, &b), a);
        prop_assert_eq!(SegmentPath.point(1.0, &a, &b), b);
        prop_assert_eq!(SegmentPath.tangent(s, &a, &a), State::<4>::zeros());
    }

    #[test]
    fn fluctuations_split_the_path_integral(a in swe_state(), b in swe_state(), mu in 20.0..40.0f64) {
        let swe = TwoLayerSwe::default();
        let p = PathIntegrator::segment();
        let sl = State::<4>::repeat(mu.sqrt());
        let (dm, dp) = fluctuations(&swe, &p, &sl, &a, &b).unwrap();
        let total = p.integrate(&swe, &a, &b).unwrap();
        let scale = 1f64.max(dm.amax()).max(dp.amax());
        prop_assert!((dm + dp - total).amax() <= 1e-14 * scale);
    }

    #[test]
    fn relaxed_step_keeps_constant_states(u in swe_state(), n in 3usize..30) {
        let swe = TwoLayerSwe::default();
        let params = RelaxationParams::with_mu(25.0, 0.9).unwrap();
        let sol = GridSolution::from_fn(Grid1D::over(0.0, 1.0, n).unwrap(), |_| u);
        let dt = params.dt(sol.grid.dx()).unwrap();
        let next = relaxed_step(&swe, &PathIntegrator::segment(), &params, &BoundarySpec::neumann(), &sol, dt).unwrap();
        prop_assert!(next.u.iter().all(|v| *v == u));
    }

    #[test]
    fn l1_error_is_a_metric(shift in -1.0..1.0f64, k in 0u32..3) {
        let fine = 16 << k;
        let a = GridSolution::from_fn(Grid1D::over(-1.0, 1.0, fine).unwrap(), |x| vector![x * x, x]);
        let b = GridSolution::from_fn(Grid1D::over(-1.0, 1.0, 16).unwrap(), |x| vector![x * x + shift, x]);
        let ab = l1_error(&a, &b).unwrap();
        let ba = l1_error(&b, &a).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert!(ab.iter().all(|e| *e >= 0.0));
        // Averages of x² differ from center values by dx²/12, hence the slack.
        let dx = 2.0 / 16.0;
        prop_assert!((ab[0] - 2.0 * shift.abs()).abs() <= 2.0 * dx * dx / 12.0 + 1e-12);
    }

    #[test]
    fn eoc_of_geometric_errors(e0 in 1e-6..1.0f64, rate in 0.5..3.0f64, n in 2usize..6) {
        let errs: Vec<f64> = (0..n).map(|k| e0 * 2f64.powf(-rate * k as f64)).collect();
        let o = eoc(&errs).unwrap();
        prop_assert!(o[0].is_none());
        for v in &o[1..] {
            prop_assert!((v.unwrap() - rate).abs() < 1e-10);
        }
    }

    #[test]
    fn config_overrides_round_trip(n in 1usize..10_000, cfl in 0.01..1.0f64, t in 0.01..20.0f64) {
        let mut pairs = RunConfig::preset(Preset::BloodCoupled).pairs()
            .into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Vec<_>>();
        pairs.push(("n_cells".into(), n.to_string()));
        pairs.push(("cfl".into(), cfl.to_string()));
        pairs.push(("t_end".into(), t.to_string()));
        let cfg = RunConfig::from_pairs(&pairs).unwrap();
        prop_assert_eq!((cfg.n_cells, cfg.cfl, cfg.t_end), (n, cfl, t));
        prop_assert_eq!(RunConfig::from_pairs(&cfg.pairs()).unwrap(), cfg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Newton finds a Kirchhoff root on the Lax curves for traces near rest.
    #[test]
    fn riemann_solver_roots(um in blood_state(), up in blood_state(), alpha in prop::sample::select(vec![1.0, 4.0 / 3.0])) {
        let d = CoupledDomain::new(
            BloodVessel::new(alpha, beta(0.5)),
            BloodVessel::new(alpha, beta(0.1)),
            Grid1D::over(-1.0, 0.0, 4).unwrap(),
            Grid1D::over(0.0, 1.0, 4).unwrap(),
            RelaxationParams::with_mu(0.16, 0.9).unwrap(),
            RelaxationParams::with_mu(0.16, 0.9).unwrap(),
            vector![5.0, 0.0],
            vector![5.0, 0.0],
            RiemannSolverKind::Kirchhoff,
        ).unwrap();
        let data = d.solve_riemann(&um, &up).unwrap();
        prop_assert!(data.residual <= 1e-12);
        let sl = State::<2>::repeat(0.4);
        prop_assert_eq!(data.u_r, um - data.sigma_minus.component_div(&sl));
        prop_assert_eq!(data.u_l, up + data.sigma_plus.component_div(&sl));
        let (b1, b2) = d.kirchhoff_residual(&data.sigma_minus, &data.sigma_plus, &um, &up).unwrap();
        prop_assert!(b1.amax().max(b2.amax()) <= 1e-12);
    }

    /// For α = 1 the root makes the physical flux continuous across the interface.
    #[test]
    fn conservative_root_matches_fluxes(um in blood_state(), up in blood_state()) {
        let v = BloodVessel::new(1.0, beta(0.5));
        let d = CoupledDomain::new(
            v, v,
            Grid1D::over(-1.0, 0.0, 4).unwrap(),
            Grid1D::over(0.0, 1.0, 4).unwrap(),
            RelaxationParams::with_mu(0.16, 0.9).unwrap(),
            RelaxationParams::with_mu(0.16, 0.9).unwrap(),
            vector![5.0, 0.0],
            vector![5.0, 0.0],
            RiemannSolverKind::Kirchhoff,
        ).unwrap().with_paths(PathIntegrator::segment().with_closed_form(true));
        let data = d.solve_riemann(&um, &up).unwrap();
        let (fr, fl) = (v.flux(&data.u_r).unwrap(), v.flux(&data.u_l).unwrap());
        assert_relative_eq!(fr[0], fl[0], epsilon = 1e-11);
        assert_relative_eq!(fr[1], fl[1], epsilon = 1e-11);
    }
}
