//! Gauss–Lobatto rules on the unit interval.

use crate::error::{Error, Result};

/// A quadrature rule on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Quadrature {
    /// Build a rule from nodes in `[0, 1]` and weights summing to one.
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::InvalidParam(format!(
                "quadrature needs matching non-empty nodes/weights, got {} and {}",
                nodes.len(),
                weights.len()
            )));
        }
        if nodes.iter().any(|s| !(0.0..=1.0).contains(s)) {
            return Err(Error::InvalidParam("quadrature nodes must lie in [0, 1]".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParam(format!(
                "quadrature weights sum to {total}, expected 1"
            )));
        }
        Ok(Quadrature { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `∫₀¹ f(s) ds` by this rule.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.iter().map(|(s, w)| w * f(s)).sum()
    }
}

impl Default for Quadrature {
    fn default() -> Self {
        gauss_lobatto_5()
    }
}

/// Five-point Gauss–Lobatto rule mapped to `[0, 1]`, exact up to degree 7.
pub fn gauss_lobatto_5() -> Quadrature {
    let r = (3.0f64 / 7.0).sqrt();
    Quadrature {
        nodes: vec![0.0, 0.5 - 0.5 * r, 0.5, 0.5 + 0.5 * r, 1.0],
        weights: vec![1.0 / 20.0, 49.0 / 180.0, 16.0 / 45.0, 49.0 / 180.0, 1.0 / 20.0],
    }
}

/// `n`-point Gauss–Lobatto rule on `[0, 1]` (`n ≥ 2`), exact up to degree `2n − 3`.
///
/// Interior nodes are the roots of `P'_{n−1}`, found by Newton's method from
/// Chebyshev–Gauss–Lobatto starting points.
pub fn gauss_lobatto(n: usize) -> Result<Quadrature> {
    if n < 2 {
        return Err(Error::InvalidParam(format!(
            "Gauss–Lobatto needs at least 2 nodes, got {n}"
        )));
    }
    if n == 5 {
        return Ok(gauss_lobatto_5());
    }
    let deg = n - 1;
    let mut x: Vec<f64> = (0..n)
        .map(|i| -(std::f64::consts::PI * i as f64 / deg as f64).cos())
        .collect();
    for xi in x.iter_mut().take(n - 1).skip(1) {
        for _ in 0..100 {
            // Newton on P'_deg using P'' from the Legendre equation.
            let (p, dp) = legendre(deg, *xi);
            let d2p = (2.0 * *xi * dp - (deg * (deg + 1)) as f64 * p) / (1.0 - *xi * *xi);
            let step = dp / d2p;
            *xi -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
    }
    x[0] = -1.0;
    x[deg] = 1.0;
    let scale = 2.0 / (deg as f64 * (deg as f64 + 1.0));
    let nodes: Vec<f64> = x.iter().map(|&xi| 0.5 * (xi + 1.0)).collect();
    let weights: Vec<f64> = x
        .iter()
        .map(|&xi| {
            let (p, _) = legendre(deg, xi);
            0.5 * scale / (p * p)
        })
        .collect();
    Quadrature::new(nodes, weights)
}

/// Legendre polynomial `P_n(x)` and its derivative by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = if (1.0 - x * x).abs() < 1e-300 {
        0.5 * (n * (n + 1)) as f64 * x.powi(n as i32 + 1)
    } else {
        n as f64 * (p0 - x * p1) / (1.0 - x * x)
    };
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn monomial_exact(k: i32) -> f64 {
        1.0 / (k as f64 + 1.0)
    }

    #[test]
    fn weights_sum_to_one() {
        let q = gauss_lobatto_5();
        assert!((q.integrate(|_| 1.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lobatto5_exact_to_degree_seven() {
        let q = gauss_lobatto_5();
        for k in 0..=7 {
            let got = q.integrate(|s| s.powi(k));
            assert!(
                (got - monomial_exact(k)).abs() < 1e-13,
                "degree {k}: {got} vs {}",
                monomial_exact(k)
            );
        }
        assert!((q.integrate(|s| s.powi(7)) - 0.125).abs() < 1e-13);
    }

    #[test]
    fn lobatto5_not_exact_at_degree_eight() {
        let err = (gauss_lobatto_5().integrate(|s| s.powi(8)) - 1.0 / 9.0).abs();
        assert!(err > 0.0 && err < 1e-3, "err = {err}");
    }

    #[test]
    fn general_rule_exactness() {
        let q6 = gauss_lobatto(6).unwrap();
        for k in 0..=9 {
            let got = q6.integrate(|s| s.powi(k));
            assert!((got - monomial_exact(k)).abs() < 1e-13, "degree {k}");
        }
        let q3 = gauss_lobatto(3).unwrap();
        assert_eq!(q3.nodes().len(), 3);
        assert!((q3.nodes()[1] - 0.5).abs() < 1e-15);
        assert!((q3.weights()[1] - 2.0 / 3.0).abs() < 1e-14);
        assert!(gauss_lobatto(1).is_err());
    }

    #[test]
    fn rejects_bad_rules() {
        assert!(Quadrature::new(vec![0.0, 1.0], vec![0.5]).is_err());
        assert!(Quadrature::new(vec![0.0, 1.5], vec![0.5, 0.5]).is_err());
        assert!(Quadrature::new(vec![0.0, 1.0], vec![0.5, 0.6]).is_err());
    }
}
