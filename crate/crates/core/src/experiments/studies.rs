use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::grid::GridSolution;
use crate::models::{BloodVessel, SystemModel};
use crate::schemes::{Domain, RunStats, SchemeKind};
use crate::State;

use super::config::{ModelChoice, Preset, RunConfig, Scheme};
use super::metrics::{l1_error, ErrorReport};
use super::output::{write_blood_pair, write_metadata, write_report, write_solution, write_summary, SWE_COLUMNS};
use super::presets::{blood_coupled, blood_domain, riemann_data, swe_domain, swe_initial};

/// How L¹ errors of the grid study are measured; recorded in metadata.
pub const GRID_REFERENCE_CONVENTION: &str =
    "relaxed scheme on reference_cells cells, block-averaged onto each study grid";
/// Nothing else fixes the length of the two vessels.
pub const BLOOD_DOMAIN_NOTE: &str =
    "vessel length is a free parameter; length = 1 lets the pulse reach x = 0 well before t_end = 12";

/// Files written by a run or study, plus headline numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub files: Vec<PathBuf>,
    pub summary: Vec<(String, f64)>,
}

fn kind(scheme: Scheme) -> SchemeKind {
    match scheme {
        Scheme::Relaxation => SchemeKind::Relaxation,
        _ => SchemeKind::Relaxed,
    }
}

fn evolve<const M: usize, S: SystemModel<M>>(
    d: &Domain<M, S>,
    init: GridSolution<M>,
    cfg: &RunConfig,
) -> Result<(GridSolution<M>, RunStats)> {
    d.evolve(init, cfg.t_end, kind(cfg.scheme))
}

/// One end-to-end run: `solution.csv`, `report.csv` and `metadata.txt` in `cfg.out`.
pub fn run(cfg: &RunConfig) -> Result<Artifacts> {
    cfg.validate()?;
    let sol_path = cfg.out.join("solution.csv");
    let mut derived: Vec<(&str, String)> = Vec::new();
    let summary: Vec<(String, f64)> = match (cfg.preset, cfg.model) {
        (Preset::BloodCoupled, _) => {
            let (d, l, r) = blood_coupled(cfg, cfg.n_cells)?;
            let run = d.evolve(l, r, cfg.t_end)?;
            write_blood_pair(&sol_path, (&d.left, &d.right), &run.left, &run.right)?;
            let e = d.coupling_error(&run.left, &run.right)?;
            derived.push(("dx", d.grid_left.dx().to_string()));
            derived.push(("dt", run.dt.to_string()));
            derived.push(("domain_note", BLOOD_DOMAIN_NOTE.into()));
            vec![
                ("t_end".into(), cfg.t_end),
                ("steps".into(), run.steps as f64),
                ("dt".into(), run.dt),
                ("coupling_error_1".into(), e[0]),
                ("coupling_error_2".into(), e[1]),
                ("max_newton_iterations".into(), run.max_newton_iterations as f64),
            ]
        }
        (Preset::Custom, ModelChoice::Blood) => {
            let d = blood_domain(cfg)?;
            let grid = crate::grid::Grid1D::over(cfg.x_min, cfg.x_max, cfg.n_cells)?;
            let (sol, stats) = evolve(&d, riemann_data::<2>(grid, &cfg.left_state, &cfg.right_state), cfg)?;
            write_solution(&sol_path, &["x", "a", "u"], &sol)?;
            single_summary(cfg, &sol, &stats, &mut derived)
        }
        _ => {
            let d = swe_domain(cfg)?;
            let (sol, stats) = evolve(&d, swe_initial(cfg, cfg.n_cells)?, cfg)?;
            write_solution(&sol_path, &SWE_COLUMNS, &sol)?;
            single_summary(cfg, &sol, &stats, &mut derived)
        }
    };
    let report = cfg.out.join("report.csv");
    let rows: Vec<(&str, f64)> = summary.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    write_summary(&report, &rows)?;
    let meta = cfg.out.join("metadata.txt");
    write_metadata(&meta, cfg, &derived)?;
    Ok(Artifacts {
        files: vec![sol_path, report, meta],
        summary,
    })
}

fn single_summary<const M: usize>(
    cfg: &RunConfig,
    sol: &GridSolution<M>,
    stats: &RunStats,
    derived: &mut Vec<(&str, String)>,
) -> Vec<(String, f64)> {
    derived.push(("dx", sol.grid.dx().to_string()));
    derived.push(("dt", stats.dt.to_string()));
    let mut out = vec![
        ("t_end".to_string(), cfg.t_end),
        ("steps".to_string(), stats.steps as f64),
        ("dt".to_string(), stats.dt),
    ];
    for (k, t) in sol.total().iter().enumerate() {
        out.push((format!("total_{k}"), *t));
    }
    out
}

fn require_swe(cfg: &RunConfig, study: &str) -> Result<()> {
    match (cfg.preset, cfg.model) {
        (Preset::SweDambreak | Preset::SweSmooth, _) | (Preset::Custom, ModelChoice::Swe) => Ok(()),
        _ => Err(Error::Config(format!("the {study} runs on a shallow water preset"))),
    }
}

fn heights(e: State<4>) -> Vec<f64> {
    vec![e[0], e[2]]
}

/// L¹ distance in `h₁`, `h₂` between the relaxation scheme at `ε = 2^-k` and the
/// relaxed scheme, both on `n_cells` cells.
pub fn eps_study(cfg: &RunConfig) -> Result<ErrorReport> {
    require_swe(cfg, "relaxation-rate study")?;
    let relaxed = RunConfig {
        scheme: Scheme::Relaxed,
        epsilon: None,
        ..cfg.clone()
    };
    let (limit, _) = evolve(&swe_domain(&relaxed)?, swe_initial(cfg, cfg.n_cells)?, &relaxed)?;
    let mut rows = Vec::new();
    for &k in &cfg.eps_exponents {
        let eps = 2f64.powi(-k);
        let c = RunConfig {
            scheme: Scheme::Relaxation,
            epsilon: Some(eps),
            ..cfg.clone()
        };
        let (sol, _) = evolve(&swe_domain(&c)?, swe_initial(cfg, cfg.n_cells)?, &c)?;
        rows.push((eps, heights(l1_error(&sol, &limit)?)));
    }
    ErrorReport::new("epsilon", &["h1", "h2"], &rows)
}

/// L¹ error in `h₁`, `h₂` of the configured scheme on each of `study_cells`
/// against the same scheme on `reference_cells` (default 4000).
pub fn grid_study(cfg: &RunConfig) -> Result<ErrorReport> {
    require_swe(cfg, "grid study")?;
    let n_ref = cfg.reference_cells.unwrap_or(4000);
    let d = swe_domain(cfg)?;
    let (reference, _) = evolve(&d, swe_initial(cfg, n_ref)?, cfg)?;
    let mut rows = Vec::new();
    for &n in &cfg.study_cells {
        let (sol, _) = evolve(&d, swe_initial(cfg, n)?, cfg)?;
        rows.push((n as f64, heights(l1_error(&reference, &sol)?)));
    }
    ErrorReport::new("n_cells", &["h1", "h2"], &rows)
}

/// Coupling errors `E_Ψ` of the blood pair at `t_end` for each of
/// `study_cells`; with `reference_cells` set, also the L¹ errors of `(a, u)`
/// summed over both vessels.
pub fn coupling_study(cfg: &RunConfig) -> Result<ErrorReport> {
    if cfg.preset != Preset::BloodCoupled {
        return Err(Error::Config(
            "the coupling study runs on the blood-coupled preset".into(),
        ));
    }
    let solve = |n: usize| -> Result<_> {
        let (d, l, r) = blood_coupled(cfg, n)?;
        let run = d.evolve(l, r, cfg.t_end)?;
        let e = d.coupling_error(&run.left, &run.right)?;
        Ok((run, e))
    };
    let reference = cfg.reference_cells.map(solve).transpose()?;
    let mut rows = Vec::new();
    for &n in &cfg.study_cells {
        let (run, e) = solve(n)?;
        let mut errs = vec![e[0], e[1]];
        if let Some((r, _)) = &reference {
            let l1 = l1_error(&r.left, &run.left)? + l1_error(&r.right, &run.right)?;
            errs.extend([l1[0], l1[1]]);
        }
        rows.push((n as f64, errs));
    }
    let columns: &[&str] = if reference.is_some() {
        &["psi_1", "psi_2", "a", "u"]
    } else {
        &["psi_1", "psi_2"]
    };
    ErrorReport::new("n_cells", columns, &rows)
}

/// Write a study report and its metadata to `cfg.out`.
pub fn write_study(cfg: &RunConfig, name: &str, report: &ErrorReport) -> Result<Artifacts> {
    let path = cfg.out.join(format!("{name}.csv"));
    write_report(&path, report)?;
    let mut derived: Vec<(&str, String)> = vec![("study", name.into())];
    match name {
        "grid-study" => {
            derived.push(("reference_convention", GRID_REFERENCE_CONVENTION.into()));
            derived.push(("reference_cells_used", cfg.reference_cells.unwrap_or(4000).to_string()));
        }
        "coupling-study" => derived.push(("domain_note", BLOOD_DOMAIN_NOTE.into())),
        _ => {}
    }
    let meta = cfg.out.join(format!("{name}.metadata.txt"));
    write_metadata(&meta, cfg, &derived)?;
    let summary = report
        .rows
        .iter()
        .flat_map(|row| {
            let p = row.parameter;
            report
                .columns
                .iter()
                .zip(&row.errors)
                .map(move |(c, e)| (format!("{c}@{p}"), *e))
        })
        .collect();
    Ok(Artifacts {
        files: vec![path, meta],
        summary,
    })
}

/// Flow rate and pressure on both sides of `x = 0` for a blood pair.
pub fn interface_jumps(
    vessels: (&BloodVessel, &BloodVessel),
    left: &GridSolution<2>,
    right: &GridSolution<2>,
) -> Result<InterfaceJumps> {
    let (um, up) = match (left.u.last(), right.u.first()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InvalidParam("empty vessel".into())),
    };
    let amp = |f: &dyn Fn(&BloodVessel, &State<2>) -> Result<f64>| -> Result<f64> {
        let mut m: f64 = 0.0;
        for u in &left.u {
            m = m.max(f(vessels.0, u)?.abs());
        }
        for u in &right.u {
            m = m.max(f(vessels.1, u)?.abs());
        }
        Ok(m)
    };
    let q = |_: &BloodVessel, u: &State<2>| Ok(BloodVessel::flow_rate(u));
    let p = |v: &BloodVessel, u: &State<2>| v.pressure(u[0]);
    let dev = |v: &BloodVessel, u: &State<2>| Ok(u[0] - v.a0);
    Ok(InterfaceJumps {
        flow_rate: ((q(vessels.0, um)? - q(vessels.1, up)?).abs(), amp(&q)?),
        pressure: ((p(vessels.0, um)? - p(vessels.1, up)?).abs(), amp(&p)?),
        area: ((um[0] - up[0]).abs(), amp(&dev)?),
    })
}

/// `(|jump at x = 0|, max |deviation from rest| over both vessels)` per quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceJumps {
    pub flow_rate: (f64, f64),
    pub pressure: (f64, f64),
    pub area: (f64, f64),
}

impl InterfaceJumps {
    pub fn relative(pair: (f64, f64)) -> f64 {
        if pair.1 > 0.0 {
            pair.0 / pair.1
        } else {
            0.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::Preset;

    fn small(preset: Preset, out: &std::path::Path) -> RunConfig {
        RunConfig {
            n_cells: 40,
            out: out.to_path_buf(),
            ..RunConfig::preset(preset)
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        for preset in [Preset::SweDambreak, Preset::BloodCoupled] {
            let mut cfg = small(preset, &dir.path().join("a"));
            cfg.t_end = if preset == Preset::BloodCoupled { 2.0 } else { 0.1 };
            let a = run(&cfg).unwrap();
            let first = std::fs::read(&a.files[0]).unwrap();
            cfg.out = dir.path().join("b");
            let b = run(&cfg).unwrap();
            assert_eq!(first, std::fs::read(&b.files[0]).unwrap());
            assert_eq!(a.summary, b.summary);
        }
    }

    #[test]
    fn dambreak_solution_shape() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small(Preset::SweDambreak, dir.path());
        let a = run(&cfg).unwrap();
        let text = std::fs::read_to_string(&a.files[0]).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "x,h1,q1,h2,q2");
        assert_eq!(lines.len(), 41);
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 5));
        let meta = std::fs::read_to_string(&a.files[2]).unwrap();
        assert!(meta.contains("derived.dt = ") && meta.contains("preset = swe-dambreak"));
    }

    #[test]
    fn custom_blood_riemann_problem() {
        let dir = tempfile::tempdir().unwrap();
        let pairs = [
            ("preset", "custom"),
            ("model", "blood"),
            ("mu", "0.16"),
            ("x_min", "-1"),
            ("x_max", "1"),
            ("n_cells", "50"),
            ("t_end", "1"),
            ("left_state", "5.2,0"),
            ("right_state", "5,0"),
            ("out", dir.path().to_str().unwrap()),
        ];
        let cfg = RunConfig::from_pairs(&pairs).unwrap();
        let a = run(&cfg).unwrap();
        assert!(a.summary.iter().any(|(k, _)| k == "total_0"));
    }

    #[test]
    fn studies_need_matching_presets() {
        let cfg = RunConfig::preset(Preset::BloodCoupled);
        assert_eq!(eps_study(&cfg).unwrap_err().exit_code(), 1);
        assert_eq!(grid_study(&cfg).unwrap_err().exit_code(), 1);
        let swe = RunConfig::preset(Preset::SweSmooth);
        assert_eq!(coupling_study(&swe).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn small_eps_study_decreases() {
        let cfg = RunConfig {
            n_cells: 100,
            eps_exponents: vec![4, 5, 6],
            ..RunConfig::preset(Preset::SweSmooth)
        };
        let r = eps_study(&cfg).unwrap();
        for c in 0..2 {
            let col = r.column(c);
            assert!(col.windows(2).all(|w| w[1] < w[0]), "{col:?}");
        }
    }
}
