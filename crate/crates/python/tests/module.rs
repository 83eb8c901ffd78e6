use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module(code: &std::ffi::CStr) {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "ncrelax").unwrap();
        ncrelax_py::register(&m).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("nc", m).unwrap();
        if let Err(e) = py.run(code, Some(&globals), None) {
            e.display(py);
            panic!("python snippet failed: {e}");
        }
    });
}

#[test]
fn config_round_trip_and_errors() {
    with_module(
        c"
cfg = nc.RunConfig('blood-coupled', n_cells=40, study_cells=[20, 40])
assert cfg.preset == 'blood-coupled' and cfg.n_cells == 40
assert cfg.get('study_cells') == '20,40'
cfg.set('t_end', 2.5)
assert cfg.t_end == 2.5
try:
    cfg.set('cfl', -1)
    raise AssertionError('accepted a negative CFL')
except ValueError:
    pass
assert cfg.get('cfl') == '0.9'
assert 'swe-smooth' in nc.RunConfig.presets()
try:
    nc.RunConfig('heart')
    raise AssertionError('accepted an unknown preset')
except ValueError:
    pass
",
    );
}

#[test]
fn simulate_and_metrics() {
    with_module(
        c"
sol = nc.simulate(nc.RunConfig('swe-dambreak', n_cells=100, t_end=0.05))
assert sol.columns == ['x', 'h1', 'q1', 'h2', 'q2'] and len(sol) == 100
assert sol.time == 0.05 and sol.steps > 0
h1 = sol.column('h1')
assert all(h > 0 for h in h1)

blood = nc.simulate(nc.RunConfig('blood-coupled', n_cells=20, t_end=2.0))
assert len(blood) == 40 and set(blood.column('side')) == {1.0, 2.0}

assert nc.eoc([1.0, 0.5, 0.25]) == [None, 1.0, 1.0]
e = nc.l1_error([[1.0, 0.0]] * 4, [[2.0, 0.0]] * 2, 0.0, 2.0)
assert abs(e[0] - 2.0) < 1e-15 and e[1] == 0.0

swe = nc.TwoLayerSwe()
dm, dp = swe.fluctuations([1.0, 0.1, 0.8, 0.0], [0.9, 0.0, 1.0, 0.2], 25.0)
assert len(dm) == 4 and len(dp) == 4
v = nc.BloodVessel.from_wall(1.0, 0.5)
assert v.pressure(5.0) == 0.0
try:
    v.pressure(-1.0)
    raise AssertionError('accepted a negative area')
except nc.NumericalError:
    pass
",
    );
}

#[test]
fn studies_and_check() {
    with_module(
        c"
r = nc.grid_study(nc.RunConfig('swe-smooth', study_cells=[32, 64], reference_cells=128, t_end=0.1))
assert r.columns == ['h1', 'h2'] and r.parameters == [32.0, 64.0]
assert r.eoc[0] == [None, None] and all(x is not None for x in r.eoc[1])
header, rows = r.records()
assert header[0] == 'n_cells' and len(rows) == 2
results = nc.check(nc.RunConfig('swe-smooth', n_cells=40))
assert [n for n, _, _ in results] == ['subchar_check', 'phi_conservativity', 'm_vanishing']
assert all(ok for _, ok, _ in results)
",
    );
}
