use crate::error::{Error, Result};
use crate::grid::GridSolution;
use crate::State;

/// Per-component L¹ distance `Δx Σⱼ |aⱼ − bⱼ|`.
///
/// When the resolutions differ by an integer factor the finer solution is
/// block-averaged onto the coarser grid first.
pub fn l1_error<const M: usize>(a: &GridSolution<M>, b: &GridSolution<M>) -> Result<State<M>> {
    let (fine, coarse) = if a.n_cells() >= b.n_cells() { (a, b) } else { (b, a) };
    let factor = fine.n_cells() / coarse.n_cells().max(1);
    let span = |s: &GridSolution<M>| (s.grid.x_left(), s.grid.x_right());
    let tol = 1e-9 * coarse.grid.dx();
    let ((fl, fr), (cl, cr)) = (span(fine), span(coarse));
    if factor * coarse.n_cells() != fine.n_cells() || (fl - cl).abs() > tol || (fr - cr).abs() > tol {
        return Err(Error::GridMismatch(format!(
            "cannot compare {} cells on ({fl}, {fr}) with {} cells on ({cl}, {cr})",
            fine.n_cells(),
            coarse.n_cells()
        )));
    }
    let projected;
    let fine = if factor > 1 {
        projected = fine.coarsened(factor)?;
        &projected
    } else {
        fine
    };
    let sum = fine
        .u
        .iter()
        .zip(&coarse.u)
        .fold(State::<M>::zeros(), |acc, (x, y)| acc + (x - y).abs());
    Ok(sum * coarse.grid.dx())
}

/// Experimental orders `log₂(E_k / E_{k+1})`; the first entry is `None`.
pub fn eoc(errors: &[f64]) -> Result<Vec<Option<f64>>> {
    if errors.len() < 2 {
        return Err(Error::InvalidParam(format!(
            "an EOC needs at least two errors, got {}",
            errors.len()
        )));
    }
    if let Some(e) = errors.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(Error::InvalidParam(format!("EOC of a nonpositive error {e}")));
    }
    let mut out = vec![None];
    out.extend(errors.windows(2).map(|w| Some((w[0] / w[1]).log2())));
    Ok(out)
}

/// One line of an [`ErrorReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    /// Resolution or relaxation rate.
    pub parameter: f64,
    pub errors: Vec<f64>,
    pub eoc: Vec<Option<f64>>,
}

/// Error table with one EOC column per error column.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub parameter: String,
    pub columns: Vec<String>,
    pub rows: Vec<ReportRow>,
}

impl ErrorReport {
    /// Table from `(parameter, errors)` rows, each with one error per column.
    pub fn new(parameter: &str, columns: &[&str], rows: &[(f64, Vec<f64>)]) -> Result<Self> {
        if let Some((p, e)) = rows.iter().find(|(_, e)| e.len() != columns.len()) {
            return Err(Error::InvalidParam(format!(
                "row {p} has {} errors for {} columns",
                e.len(),
                columns.len()
            )));
        }
        let mut report = ErrorReport {
            parameter: parameter.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: rows
                .iter()
                .map(|(p, e)| ReportRow {
                    parameter: *p,
                    errors: e.clone(),
                    eoc: vec![None; e.len()],
                })
                .collect(),
        };
        for c in 0..columns.len() {
            let col: Vec<f64> = rows.iter().map(|(_, e)| e[c]).collect();
            for (row, o) in report.rows.iter_mut().zip(eoc(&col)?) {
                row.eoc[c] = o;
            }
        }
        Ok(report)
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.errors[c]).collect()
    }

    /// EOCs of column `c` without the leading blank.
    pub fn eocs(&self, c: usize) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.eoc[c]).collect()
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = vec![self.parameter.clone()];
        for c in &self.columns {
            h.push(c.clone());
            h.push(format!("eoc_{c}"));
        }
        h
    }

    /// Rows as text, 17 significant digits, blank EOC on the first row.
    pub fn records(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                let mut rec = vec![format!("{:.16e}", r.parameter)];
                for (e, o) in r.errors.iter().zip(&r.eoc) {
                    rec.push(format!("{e:.16e}"));
                    rec.push(o.map_or(String::new(), |x| format!("{x:.16e}")));
                }
                rec
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;
    use nalgebra::vector;

    #[test]
    fn identical_and_constant_offset() {
        let g = Grid1D::over(-5.0, 5.0, 40).unwrap();
        let a = GridSolution::from_fn(g, |x| vector![x.sin(), 1.0]);
        assert_eq!(l1_error(&a, &a).unwrap(), State::<2>::zeros());
        let b = GridSolution::from_fn(g, |x| vector![x.sin() + 0.25, 1.0]);
        assert!((l1_error(&a, &b).unwrap()[0] - 2.5).abs() < 1e-13);
    }

    #[test]
    fn finer_solution_is_averaged_down() {
        let fine = GridSolution::from_fn(Grid1D::over(0.0, 1.0, 64).unwrap(), |x| vector![x]);
        let coarse = GridSolution::from_fn(Grid1D::over(0.0, 1.0, 16).unwrap(), |x| vector![x]);
        // Block averages of a linear function are its values at the coarse centers.
        assert!(l1_error(&fine, &coarse).unwrap()[0] < 1e-15);
        assert!(l1_error(&coarse, &fine).unwrap()[0] < 1e-15);
        let odd = GridSolution::from_fn(Grid1D::over(0.0, 1.0, 24).unwrap(), |x| vector![x]);
        assert!(matches!(l1_error(&fine, &odd), Err(Error::GridMismatch(_))));
        let shifted = GridSolution::from_fn(Grid1D::over(0.5, 1.5, 16).unwrap(), |x| vector![x]);
        assert!(l1_error(&coarse, &shifted).is_err());
    }

    #[test]
    fn eoc_values() {
        let o = eoc(&[1.66e-1, 8.80e-2]).unwrap();
        assert_eq!(o[0], None);
        assert!((o[1].unwrap() - 0.92).abs() < 5e-3);
        assert_eq!(eoc(&[4.0, 2.0, 1.0]).unwrap(), vec![None, Some(1.0), Some(1.0)]);
        assert!((eoc(&[2.12e-5, 1.11e-5]).unwrap()[1].unwrap() - 0.93).abs() < 5e-3);
        assert!(eoc(&[1.0, 0.0]).is_err());
        assert!(eoc(&[1.0]).is_err());
    }

    #[test]
    fn report_layout() {
        let r = ErrorReport::new(
            "n_cells",
            &["h1", "h2"],
            &[(500.0, vec![4.0, 8.0]), (1000.0, vec![2.0, 2.0])],
        )
        .unwrap();
        assert_eq!(r.header(), ["n_cells", "h1", "eoc_h1", "h2", "eoc_h2"]);
        assert_eq!(r.eocs(1), vec![2.0]);
        let rec = r.records();
        assert_eq!(rec[0][2], "");
        assert_eq!(rec[1][2], format!("{:.16e}", 1.0));
        assert!(ErrorReport::new("n", &["a"], &[(1.0, vec![1.0, 2.0]), (2.0, vec![1.0])]).is_err());
    }
}
