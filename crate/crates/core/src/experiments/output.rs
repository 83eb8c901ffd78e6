use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::Result;
use crate::grid::GridSolution;
use crate::models::BloodVessel;

use super::config::RunConfig;
use super::metrics::ErrorReport;

pub const SWE_COLUMNS: [&str; 5] = ["x", "h1", "q1", "h2", "q2"];
pub const BLOOD_COLUMNS: [&str; 6] = ["x", "a", "u", "flow_rate", "pressure", "side"];

fn write_records(path: &Path, header: &[String], records: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(path).map_err(std::io::Error::from)?;
    w.write_record(header).map_err(std::io::Error::from)?;
    for r in records {
        w.write_record(&r).map_err(std::io::Error::from)?;
    }
    w.flush()?;
    Ok(())
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Cell centers and cell averages, one row per cell.
pub fn write_solution<const M: usize>(path: &Path, columns: &[&str], sol: &GridSolution<M>) -> Result<()> {
    let header: Vec<String> = columns.iter().map(|c| c.to_string()).collect();
    let rows = sol
        .grid
        .centers()
        .zip(&sol.u)
        .map(|(x, u)| std::iter::once(x).chain(u.iter().copied()).map(fmt).collect());
    write_records(path, &header, rows)
}

/// Both vessels of a coupled blood run with flow rate `Q = au` and pressure;
/// `side` is `1` on `(−L, 0)` and `2` on `(0, L)`.
pub fn write_blood_pair(
    path: &Path,
    vessels: (&BloodVessel, &BloodVessel),
    left: &GridSolution<2>,
    right: &GridSolution<2>,
) -> Result<()> {
    let mut rows = Vec::with_capacity(left.n_cells() + right.n_cells());
    for (side, v, sol) in [(1, vessels.0, left), (2, vessels.1, right)] {
        for (x, u) in sol.grid.centers().zip(&sol.u) {
            let mut r: Vec<String> = [x, u[0], u[1], BloodVessel::flow_rate(u), v.pressure(u[0])?]
                .into_iter()
                .map(fmt)
                .collect();
            r.push(side.to_string());
            rows.push(r);
        }
    }
    let header: Vec<String> = BLOOD_COLUMNS.iter().map(|c| c.to_string()).collect();
    write_records(path, &header, rows)
}

pub fn write_report(path: &Path, report: &ErrorReport) -> Result<()> {
    write_records(path, &report.header(), report.records())
}

/// `quantity,value` table.
pub fn write_summary(path: &Path, rows: &[(&str, f64)]) -> Result<()> {
    let header = vec!["quantity".to_string(), "value".to_string()];
    write_records(path, &header, rows.iter().map(|(k, v)| vec![k.to_string(), fmt(*v)]))
}

/// All config fields followed by derived values (as `derived.<key>`), in the
/// config file format.
pub fn write_metadata(path: &Path, cfg: &RunConfig, derived: &[(&str, String)]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut f = fs::File::create(path)?;
    for (k, v) in cfg.pairs() {
        writeln!(f, "{k} = {v}")?;
    }
    for (k, v) in derived {
        writeln!(f, "derived.{k} = {v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::{parse_pairs, Preset};
    use crate::grid::Grid1D;
    use nalgebra::vector;

    #[test]
    fn solution_rows_carry_seventeen_digits() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let sol = GridSolution::from_fn(Grid1D::over(0.0, 1.0, 3).unwrap(), |x| vector![x, 1.0 / 3.0]);
        write_solution(&path, &["x", "a", "b"], &sol).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "x,a,b");
        let third: f64 = lines[1].split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(third, 1.0 / 3.0);
    }

    #[test]
    fn metadata_reads_back_as_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("meta.txt");
        let cfg = RunConfig::preset(Preset::BloodCoupled);
        write_metadata(&path, &cfg, &[("dx", "0.002".into())]).unwrap();
        let pairs = parse_pairs(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(RunConfig::from_pairs(&pairs).unwrap(), cfg);
    }
}
