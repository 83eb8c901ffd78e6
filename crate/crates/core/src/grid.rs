use crate::error::{Error, Result};
use crate::State;

/// Uniform grid: cell `j` spans `[x_left + j·dx, x_left + (j+1)·dx)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_left: f64,
    dx: f64,
    n_cells: usize,
}

impl Grid1D {
    pub fn new(x_left: f64, dx: f64, n_cells: usize) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() || !x_left.is_finite() {
            return Err(Error::InvalidParam(format!("grid spacing must be positive, got {dx}")));
        }
        if n_cells == 0 {
            return Err(Error::InvalidParam("grid needs at least one cell".into()));
        }
        Ok(Grid1D { x_left, dx, n_cells })
    }

    /// `n_cells` cells covering `[a, b]`.
    pub fn over(a: f64, b: f64, n_cells: usize) -> Result<Self> {
        if !(b > a) {
            return Err(Error::InvalidParam(format!("empty interval [{a}, {b}]")));
        }
        if n_cells == 0 {
            return Err(Error::InvalidParam("grid needs at least one cell".into()));
        }
        Self::new(a, (b - a) / n_cells as f64, n_cells)
    }

    pub fn x_left(&self) -> f64 {
        self.x_left
    }

    pub fn x_right(&self) -> f64 {
        self.x_left + self.dx * self.n_cells as f64
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn center(&self, j: usize) -> f64 {
        self.x_left + (j as f64 + 0.5) * self.dx
    }

    /// Left edge of cell `j` (`j = n_cells` gives the right end).
    pub fn edge(&self, j: usize) -> f64 {
        self.x_left + j as f64 * self.dx
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_cells).map(|j| self.center(j))
    }

    /// The grid with `factor` times fewer cells over the same interval.
    pub fn coarsened(&self, factor: usize) -> Result<Self> {
        if factor == 0 || !self.n_cells.is_multiple_of(factor) {
            return Err(Error::GridMismatch(format!(
                "{} cells cannot be coarsened by {factor}",
                self.n_cells
            )));
        }
        Self::new(self.x_left, self.dx * factor as f64, self.n_cells / factor)
    }
}

/// Cell averages of `U` (and `V` for finite-ε runs) at time `time`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSolution<const M: usize> {
    pub grid: Grid1D,
    pub u: Vec<State<M>>,
    pub v: Option<Vec<State<M>>>,
    pub time: f64,
}

impl<const M: usize> GridSolution<M> {
    pub fn new(grid: Grid1D, u: Vec<State<M>>) -> Result<Self> {
        if u.len() != grid.n_cells() {
            return Err(Error::GridMismatch(format!(
                "{} cell values for a grid of {} cells",
                u.len(),
                grid.n_cells()
            )));
        }
        Ok(GridSolution {
            grid,
            u,
            v: None,
            time: 0.0,
        })
    }

    /// Sample `init` at the cell centers.
    pub fn from_fn(grid: Grid1D, init: impl Fn(f64) -> State<M>) -> Self {
        GridSolution {
            u: grid.centers().map(init).collect(),
            grid,
            v: None,
            time: 0.0,
        }
    }

    pub fn with_v(mut self, v: Vec<State<M>>) -> Result<Self> {
        if v.len() != self.grid.n_cells() {
            return Err(Error::GridMismatch(format!(
                "{} auxiliary values for a grid of {} cells",
                v.len(),
                self.grid.n_cells()
            )));
        }
        self.v = Some(v);
        Ok(self)
    }

    pub fn n_cells(&self) -> usize {
        self.u.len()
    }

    /// Column `k` of the cell averages.
    pub fn component(&self, k: usize) -> Vec<f64> {
        self.u.iter().map(|u| u[k]).collect()
    }

    /// `Σⱼ Uⱼ Δx`.
    pub fn total(&self) -> State<M> {
        self.u.iter().fold(State::<M>::zeros(), |acc, u| acc + u) * self.grid.dx()
    }

    /// Block-average onto a grid with `factor` times fewer cells.
    pub fn coarsened(&self, factor: usize) -> Result<Self> {
        let grid = self.grid.coarsened(factor)?;
        let u = self
            .u
            .chunks(factor)
            .map(|c| c.iter().fold(State::<M>::zeros(), |acc, u| acc + u) / factor as f64)
            .collect();
        Ok(GridSolution {
            grid,
            u,
            v: None,
            time: self.time,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::vector;

    #[test]
    fn centers_and_edges() {
        let g = Grid1D::over(-5.0, 5.0, 4).unwrap();
        assert_eq!(g.dx(), 2.5);
        assert_eq!(g.center(0), -3.75);
        assert_eq!(g.edge(4), 5.0);
        assert_eq!(g.x_right(), 5.0);
        // Interface between cells -1 and 0 of a coupled pair sits at x = 0.
        let left = Grid1D::over(-1.0, 0.0, 10).unwrap();
        assert!((left.edge(10)).abs() < 1e-15);
    }

    #[test]
    fn invalid_grids() {
        assert!(Grid1D::new(0.0, 0.0, 3).is_err());
        assert!(Grid1D::new(0.0, 1.0, 0).is_err());
        assert!(Grid1D::over(1.0, 1.0, 3).is_err());
    }

    #[test]
    fn block_average() {
        let g = Grid1D::over(0.0, 1.0, 4).unwrap();
        let s = GridSolution::new(g, vec![vector![1.0], vector![3.0], vector![5.0], vector![7.0]]).unwrap();
        let c = s.coarsened(2).unwrap();
        assert_eq!(c.component(0), vec![2.0, 6.0]);
        assert_eq!(c.grid.dx(), 0.5);
        assert!(s.coarsened(3).is_err());
        assert_eq!(s.total()[0], 4.0);
    }

    #[test]
    fn length_checks() {
        let g = Grid1D::over(0.0, 1.0, 2).unwrap();
        assert!(GridSolution::<1>::new(g, vec![vector![1.0]]).is_err());
        let s = GridSolution::new(g, vec![vector![1.0], vector![2.0]]).unwrap();
        assert!(s.with_v(vec![vector![0.0]]).is_err());
    }
}
