//! Python bindings: configuration, runs, convergence studies, metrics and the
//! two model families.

use std::path::PathBuf;

use nalgebra::SVector;
use pyo3::create_exception;
use pyo3::exceptions::{PyIOError, PyKeyError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList, PyTuple};

use ncrelax::experiments::{self as ex, ErrorReport, ModelChoice, Preset, Scheme};
use ncrelax::schemes::{fluctuations, SchemeKind};
use ncrelax::{Error, Grid1D, GridSolution, PathIntegrator, SystemModel};

create_exception!(
    ncrelax,
    NumericalError,
    PyRuntimeError,
    "A run left the admissible set or a solver failed."
);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Config(_) | Error::InvalidParam(_) => PyValueError::new_err(e.to_string()),
        Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => NumericalError::new_err(other.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for ncrelax::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn state<const M: usize>(v: &[f64]) -> PyResult<SVector<f64, M>> {
    if v.len() != M {
        return Err(PyValueError::new_err(format!(
            "expected {M} components, got {}",
            v.len()
        )));
    }
    Ok(SVector::<f64, M>::from_column_slice(v))
}

/// Config values arrive as Python objects; lists become comma-separated text.
fn value_text(v: &Bound<'_, PyAny>) -> PyResult<String> {
    if v.is_instance_of::<PyList>() || v.is_instance_of::<PyTuple>() {
        let parts: PyResult<Vec<String>> = v.try_iter()?.map(|x| Ok(x?.str()?.to_string())).collect();
        return Ok(parts?.join(","));
    }
    Ok(v.str()?.to_string())
}

/// Experiment configuration: a preset plus per-field overrides.
///
/// `RunConfig("swe-smooth", n_cells=500, cfl=0.1)`
#[pyclass(name = "RunConfig", module = "ncrelax")]
pub struct PyRunConfig {
    pub inner: ex::RunConfig,
}

#[pymethods]
impl PyRunConfig {
    #[new]
    #[pyo3(signature = (preset = "swe-smooth", **overrides))]
    fn new(preset: &str, overrides: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let mut pairs = vec![("preset".to_string(), preset.to_string())];
        if let Some(d) = overrides {
            for (k, v) in d.iter() {
                pairs.push((k.extract::<String>()?, value_text(&v)?));
            }
        }
        Ok(PyRunConfig {
            inner: ex::RunConfig::from_pairs(&pairs).py()?,
        })
    }

    /// Reads a `key = value` file, then applies `overrides`.
    #[staticmethod]
    #[pyo3(signature = (path, **overrides))]
    fn load(path: PathBuf, overrides: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let mut pairs = Vec::new();
        if let Some(d) = overrides {
            for (k, v) in d.iter() {
                pairs.push((k.extract::<String>()?, value_text(&v)?));
            }
        }
        Ok(PyRunConfig {
            inner: ex::load_config(Some(&path), &pairs).py()?,
        })
    }

    #[staticmethod]
    fn presets() -> Vec<&'static str> {
        Preset::ALL.iter().map(|p| p.name()).collect()
    }

    /// Sets one field; the config is left unchanged if the result is invalid.
    fn set(&mut self, key: &str, value: &Bound<'_, PyAny>) -> PyResult<()> {
        let mut next = self.inner.clone();
        next.set(key, &value_text(value)?).py()?;
        next.validate().py()?;
        self.inner = next;
        Ok(())
    }

    fn get(&self, key: &str) -> PyResult<String> {
        self.inner
            .pairs()
            .into_iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| v)
            .ok_or_else(|| PyKeyError::new_err(key.to_string()))
    }

    fn pairs(&self) -> Vec<(&'static str, String)> {
        self.inner.pairs()
    }

    #[getter]
    fn preset(&self) -> &'static str {
        self.inner.preset.name()
    }

    #[getter]
    fn n_cells(&self) -> usize {
        self.inner.n_cells
    }

    #[getter]
    fn t_end(&self) -> f64 {
        self.inner.t_end
    }

    fn __repr__(&self) -> String {
        format!(
            "RunConfig(preset={:?}, scheme={:?}, n_cells={}, cfl={}, t_end={})",
            self.inner.preset.name(),
            self.inner.scheme.name(),
            self.inner.n_cells,
            self.inner.cfl,
            self.inner.t_end
        )
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// Cell-center values of a finished run, one list per column.
#[pyclass(name = "Solution", module = "ncrelax", get_all)]
pub struct PySolution {
    pub columns: Vec<String>,
    pub values: Vec<Vec<f64>>,
    pub time: f64,
    pub steps: usize,
    pub dt: f64,
}

#[pymethods]
impl PySolution {
    fn column(&self, name: &str) -> PyResult<Vec<f64>> {
        self.columns
            .iter()
            .position(|c| c == name)
            .map(|i| self.values[i].clone())
            .ok_or_else(|| PyKeyError::new_err(name.to_string()))
    }

    fn __len__(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    fn __repr__(&self) -> String {
        format!(
            "Solution(columns={:?}, cells={}, time={})",
            self.columns,
            self.__len__(),
            self.time
        )
    }
}

fn columns_of<const M: usize>(names: &[&str], sol: &GridSolution<M>) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut values = vec![sol.grid.centers().collect::<Vec<_>>()];
    values.extend((0..M).map(|k| sol.component(k)));
    (names.iter().map(|s| s.to_string()).collect(), values)
}

fn kind(scheme: Scheme) -> SchemeKind {
    match scheme {
        Scheme::Relaxation => SchemeKind::Relaxation,
        _ => SchemeKind::Relaxed,
    }
}

fn simulate_impl(cfg: &ex::RunConfig) -> ncrelax::Result<PySolution> {
    cfg.validate()?;
    match (cfg.preset, cfg.model) {
        (Preset::BloodCoupled, _) => {
            let (d, l, r) = ex::blood_coupled(cfg, cfg.n_cells)?;
            let run = d.evolve(l, r, cfg.t_end)?;
            let mut values = vec![Vec::new(); ex::BLOOD_COLUMNS.len()];
            for (side, v, sol) in [(1.0, &d.left, &run.left), (2.0, &d.right, &run.right)] {
                for (x, u) in sol.grid.centers().zip(&sol.u) {
                    let row = [
                        x,
                        u[0],
                        u[1],
                        ncrelax::BloodVessel::flow_rate(u),
                        v.pressure(u[0])?,
                        side,
                    ];
                    for (col, val) in values.iter_mut().zip(row) {
                        col.push(val);
                    }
                }
            }
            Ok(PySolution {
                columns: ex::BLOOD_COLUMNS.iter().map(|s| s.to_string()).collect(),
                values,
                time: run.left.time,
                steps: run.steps,
                dt: run.dt,
            })
        }
        (Preset::Custom, ModelChoice::Blood) => {
            let d = ex::blood_domain(cfg)?;
            let grid = Grid1D::over(cfg.x_min, cfg.x_max, cfg.n_cells)?;
            let init = ex::riemann_data::<2>(grid, &cfg.left_state, &cfg.right_state);
            let (sol, stats) = d.evolve(init, cfg.t_end, kind(cfg.scheme))?;
            let (columns, values) = columns_of(&["x", "a", "u"], &sol);
            Ok(PySolution {
                columns,
                values,
                time: sol.time,
                steps: stats.steps,
                dt: stats.dt,
            })
        }
        _ => {
            let d = ex::swe_domain(cfg)?;
            let (sol, stats) = d.evolve(ex::swe_initial(cfg, cfg.n_cells)?, cfg.t_end, kind(cfg.scheme))?;
            let (columns, values) = columns_of(&ex::SWE_COLUMNS, &sol);
            Ok(PySolution {
                columns,
                values,
                time: sol.time,
                steps: stats.steps,
                dt: stats.dt,
            })
        }
    }
}

/// Runs `config` in memory and returns the final solution.
#[pyfunction]
fn simulate(py: Python<'_>, config: &PyRunConfig) -> PyResult<PySolution> {
    let cfg = config.inner.clone();
    py.detach(move || simulate_impl(&cfg)).py()
}

type RunOutput = (Vec<PathBuf>, Vec<(String, f64)>);

/// Runs `config` and writes `solution.csv`, `report.csv`, `metadata.txt` to its `out`.
/// Returns `(files, summary)`.
#[pyfunction]
fn run(py: Python<'_>, config: &PyRunConfig) -> PyResult<RunOutput> {
    let cfg = config.inner.clone();
    let a = py.detach(move || ex::run(&cfg)).py()?;
    Ok((a.files, a.summary))
}

/// Error table of a study; `eoc[i][c]` is `None` on the first row.
#[pyclass(name = "Report", module = "ncrelax")]
pub struct PyReport {
    pub inner: ErrorReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn parameter(&self) -> String {
        self.inner.parameter.clone()
    }

    #[getter]
    fn columns(&self) -> Vec<String> {
        self.inner.columns.clone()
    }

    #[getter]
    fn parameters(&self) -> Vec<f64> {
        self.inner.rows.iter().map(|r| r.parameter).collect()
    }

    #[getter]
    fn errors(&self) -> Vec<Vec<f64>> {
        self.inner.rows.iter().map(|r| r.errors.clone()).collect()
    }

    #[getter]
    fn eoc(&self) -> Vec<Vec<Option<f64>>> {
        self.inner.rows.iter().map(|r| r.eoc.clone()).collect()
    }

    /// CSV header and records exactly as written to disk.
    fn records(&self) -> (Vec<String>, Vec<Vec<String>>) {
        (self.inner.header(), self.inner.records())
    }

    /// Writes `<name>.csv` and `<name>.metadata.txt` into `config.out`.
    fn write(&self, config: &PyRunConfig, name: &str) -> PyResult<Vec<PathBuf>> {
        Ok(ex::write_study(&config.inner, name, &self.inner).py()?.files)
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(parameter={:?}, columns={:?}, rows={})",
            self.inner.parameter,
            self.inner.columns,
            self.inner.rows.len()
        )
    }
}

/// L¹ distance between relaxation-scheme runs at `ε = 2^-k` and the relaxed scheme.
#[pyfunction]
fn eps_study(py: Python<'_>, config: &PyRunConfig) -> PyResult<PyReport> {
    let cfg = config.inner.clone();
    Ok(PyReport {
        inner: py.detach(move || ex::eps_study(&cfg)).py()?,
    })
}

/// Mesh convergence of the relaxed scheme against `reference_cells`.
#[pyfunction]
fn grid_study(py: Python<'_>, config: &PyRunConfig) -> PyResult<PyReport> {
    let cfg = config.inner.clone();
    Ok(PyReport {
        inner: py.detach(move || ex::grid_study(&cfg)).py()?,
    })
}

/// Coupling-error convergence of the blood pair over `study_cells`.
#[pyfunction]
fn coupling_study(py: Python<'_>, config: &PyRunConfig) -> PyResult<PyReport> {
    let cfg = config.inner.clone();
    Ok(PyReport {
        inner: py.detach(move || ex::coupling_study(&cfg)).py()?,
    })
}

/// Invariant suite; a list of `(name, passed, detail)`.
#[pyfunction]
fn check(config: &PyRunConfig) -> PyResult<Vec<(&'static str, bool, String)>> {
    Ok(ex::check(&config.inner)
        .py()?
        .into_iter()
        .map(|o| (o.name, o.passed, o.detail))
        .collect())
}

/// Experimental orders of convergence between consecutive halvings.
#[pyfunction]
fn eoc(errors: Vec<f64>) -> PyResult<Vec<Option<f64>>> {
    ex::eoc(&errors).py()
}

fn l1_generic<const M: usize>(a: &[Vec<f64>], b: &[Vec<f64>], x_min: f64, x_max: f64) -> PyResult<Vec<f64>> {
    let sol = |rows: &[Vec<f64>]| -> PyResult<GridSolution<M>> {
        let u = rows.iter().map(|r| state::<M>(r)).collect::<PyResult<Vec<_>>>()?;
        GridSolution::new(Grid1D::over(x_min, x_max, rows.len()).py()?, u).py()
    };
    Ok(ex::l1_error(&sol(a)?, &sol(b)?).py()?.iter().copied().collect())
}

/// Componentwise `Δx Σ|a − b|` of two cell-average arrays (rows are states)
/// on `(x_min, x_max)`; the finer one is block-averaged if the sizes differ.
#[pyfunction]
#[pyo3(signature = (a, b, x_min = 0.0, x_max = 1.0))]
fn l1_error(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>, x_min: f64, x_max: f64) -> PyResult<Vec<f64>> {
    match a.first().map(Vec::len) {
        Some(1) => l1_generic::<1>(&a, &b, x_min, x_max),
        Some(2) => l1_generic::<2>(&a, &b, x_min, x_max),
        Some(4) => l1_generic::<4>(&a, &b, x_min, x_max),
        Some(m) => Err(PyValueError::new_err(format!(
            "states of size {m} are not supported (1, 2 or 4)"
        ))),
        None => Err(PyValueError::new_err("empty solution")),
    }
}

fn rows<const M: usize>(m: &nalgebra::SMatrix<f64, M, M>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn fluct<const M: usize, S: SystemModel<M>>(
    model: &S,
    ul: &[f64],
    ur: &[f64],
    mu: f64,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let sl = SVector::<f64, M>::repeat(mu.sqrt());
    let (dm, dp) = fluctuations(
        model,
        &PathIntegrator::segment(),
        &sl,
        &state::<M>(ul)?,
        &state::<M>(ur)?,
    )
    .py()?;
    Ok((dm.iter().copied().collect(), dp.iter().copied().collect()))
}

/// Two-layer shallow water equations, states `(h1, q1, h2, q2)`.
#[pyclass(name = "TwoLayerSwe", module = "ncrelax", frozen)]
pub struct PyTwoLayerSwe {
    inner: ncrelax::TwoLayerSwe,
}

#[pymethods]
impl PyTwoLayerSwe {
    #[new]
    #[pyo3(signature = (g = 9.81, r = 0.9))]
    fn new(g: f64, r: f64) -> PyResult<Self> {
        Ok(PyTwoLayerSwe {
            inner: ncrelax::TwoLayerSwe::new(g, r).py()?,
        })
    }

    #[getter]
    fn g(&self) -> f64 {
        self.inner.g
    }

    #[getter]
    fn r(&self) -> f64 {
        self.inner.r
    }

    fn admissible(&self, u: Vec<f64>) -> PyResult<bool> {
        Ok(self.inner.admissible(&state::<4>(&u)?))
    }

    fn matrix(&self, u: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        Ok(rows(&self.inner.matrix(&state::<4>(&u)?).py()?))
    }

    fn max_speed(&self, u: Vec<f64>) -> PyResult<f64> {
        self.inner.max_speed(&state::<4>(&u)?).py()
    }

    /// Relaxed fluctuations `(D⁻, D⁺)` between two states for `Λ = μI`.
    fn fluctuations(&self, ul: Vec<f64>, ur: Vec<f64>, mu: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
        fluct::<4, _>(&self.inner, &ul, &ur, mu)
    }

    fn __repr__(&self) -> String {
        format!("TwoLayerSwe(g={}, r={})", self.inner.g, self.inner.r)
    }
}

/// Vessel with tube law `p = β(√a − √a₀)`, states `(a, u)`.
#[pyclass(name = "BloodVessel", module = "ncrelax", frozen)]
pub struct PyBloodVessel {
    inner: ncrelax::BloodVessel,
}

#[pymethods]
impl PyBloodVessel {
    #[new]
    fn new(alpha: f64, beta: f64) -> PyResult<Self> {
        let inner = ncrelax::BloodVessel::new(alpha, beta);
        inner.validate().py()?;
        Ok(PyBloodVessel { inner })
    }

    /// Stiffness from Young's modulus and wall thickness.
    #[staticmethod]
    #[pyo3(signature = (alpha, young, thickness = 0.05, a0 = 5.0))]
    fn from_wall(alpha: f64, young: f64, thickness: f64, a0: f64) -> PyResult<Self> {
        Ok(PyBloodVessel {
            inner: ncrelax::BloodVessel::from_wall(alpha, young, thickness, a0).py()?,
        })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta
    }

    fn pressure(&self, a: f64) -> PyResult<f64> {
        self.inner.pressure(a).py()
    }

    fn area_from_pressure(&self, p: f64) -> PyResult<f64> {
        self.inner.area_from_pressure(p).py()
    }

    fn celerity(&self, a: f64) -> f64 {
        self.inner.celerity(a)
    }

    fn flux(&self, u: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(self.inner.flux(&state::<2>(&u)?).py()?.iter().copied().collect())
    }

    fn matrix(&self, u: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        Ok(rows(&self.inner.matrix(&state::<2>(&u)?).py()?))
    }

    fn max_speed(&self, u: Vec<f64>) -> PyResult<f64> {
        self.inner.max_speed(&state::<2>(&u)?).py()
    }

    fn fluctuations(&self, ul: Vec<f64>, ur: Vec<f64>, mu: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
        fluct::<2, _>(&self.inner, &ul, &ur, mu)
    }

    fn __repr__(&self) -> String {
        format!("BloodVessel(alpha={}, beta={})", self.inner.alpha, self.inner.beta)
    }
}

/// Adds every class and function to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRunConfig>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyTwoLayerSwe>()?;
    m.add_class::<PyBloodVessel>()?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(eps_study, m)?)?;
    m.add_function(wrap_pyfunction!(grid_study, m)?)?;
    m.add_function(wrap_pyfunction!(coupling_study, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(eoc, m)?)?;
    m.add_function(wrap_pyfunction!(l1_error, m)?)?;
    Ok(())
}

#[pymodule]
#[pyo3(name = "ncrelax")]
fn ncrelax_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
