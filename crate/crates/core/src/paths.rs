//! Families of paths and the path integrals `∫₀¹ A(Φ(s)) ∂ₛΦ(s) ds` that give
//! nonconservative products a meaning across jumps.

use std::sync::Arc;

use crate::error::Result;
use crate::models::SystemModel;
use crate::quadrature::{gauss_lobatto_5, Quadrature};
use crate::{Matrix, State};

/// A Lipschitz family of paths `Φ(s; W⁻, W⁺)` with `Φ(0) = W⁻` and `Φ(1) = W⁺`.
pub trait PathFamily<const M: usize>: Send + Sync {
    fn point(&self, s: f64, from: &State<M>, to: &State<M>) -> State<M>;

    /// `∂ₛΦ(s; from, to)`; must vanish when `from == to`.
    fn tangent(&self, s: f64, from: &State<M>, to: &State<M>) -> State<M>;

    /// True when the family is the straight segment family, which lets models
    /// substitute closed-form integrals.
    fn is_segment(&self) -> bool {
        false
    }

    fn name(&self) -> String;
}

/// `Φ(s; W₁, W₂) = W₁ + s (W₂ − W₁)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SegmentPath;

impl<const M: usize> PathFamily<M> for SegmentPath {
    fn point(&self, s: f64, from: &State<M>, to: &State<M>) -> State<M> {
        if s == 0.0 {
            return *from;
        }
        if s == 1.0 {
            return *to;
        }
        from + (to - from) * s
    }

    fn tangent(&self, _s: f64, from: &State<M>, to: &State<M>) -> State<M> {
        to - from
    }

    fn is_segment(&self) -> bool {
        true
    }

    fn name(&self) -> String {
        "segment".into()
    }
}

/// The reverse family `Φ̃(s; U₁, U₂) = Φ(1 − s; U₂, U₁)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Reversed<P>(pub P);

impl<const M: usize, P: PathFamily<M>> PathFamily<M> for Reversed<P> {
    fn point(&self, s: f64, from: &State<M>, to: &State<M>) -> State<M> {
        self.0.point(1.0 - s, to, from)
    }

    fn tangent(&self, s: f64, from: &State<M>, to: &State<M>) -> State<M> {
        -self.0.tangent(1.0 - s, to, from)
    }

    fn is_segment(&self) -> bool {
        self.0.is_segment()
    }

    fn name(&self) -> String {
        format!("reversed({})", self.0.name())
    }
}

/// Reverse a family of paths.
pub fn reverse_family<P>(family: P) -> Reversed<P> {
    Reversed(family)
}

/// `Σₖ wₖ A(Φ(sₖ)) ∂ₛΦ(sₖ)` for the jump `from → to`.
///
/// `matrix` is expected to reject states outside the admissible set; the first
/// rejected node aborts the integral.
pub fn path_integral<const M: usize, F>(
    matrix: F,
    family: &(impl PathFamily<M> + ?Sized),
    from: &State<M>,
    to: &State<M>,
    quad: &Quadrature,
) -> Result<State<M>>
where
    F: Fn(&State<M>) -> Result<Matrix<M>>,
{
    let mut acc = State::<M>::zeros();
    for (s, w) in quad.iter() {
        let a = matrix(&family.point(s, from, to))?;
        acc += a * family.tangent(s, from, to) * w;
    }
    Ok(acc)
}

/// A family of paths together with the quadrature used to integrate along it.
///
/// With `closed_form` enabled and a segment family, models that provide an
/// exact path integral use it instead of quadrature.
#[derive(Clone)]
pub struct PathIntegrator<const M: usize> {
    family: Arc<dyn PathFamily<M>>,
    quad: Quadrature,
    closed_form: bool,
}

impl<const M: usize> std::fmt::Debug for PathIntegrator<M> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PathIntegrator")
            .field("family", &self.family.name())
            .field("nodes", &self.quad.len())
            .field("closed_form", &self.closed_form)
            .finish()
    }
}

impl<const M: usize> Default for PathIntegrator<M> {
    fn default() -> Self {
        Self::segment()
    }
}

impl<const M: usize> PathIntegrator<M> {
    pub fn new(family: Arc<dyn PathFamily<M>>, quad: Quadrature) -> Self {
        PathIntegrator {
            family,
            quad,
            closed_form: false,
        }
    }

    /// Segment paths with five-point Gauss–Lobatto quadrature.
    pub fn segment() -> Self {
        Self::new(Arc::new(SegmentPath), gauss_lobatto_5())
    }

    pub fn with_closed_form(mut self, enabled: bool) -> Self {
        self.closed_form = enabled;
        self
    }

    pub fn family(&self) -> &dyn PathFamily<M> {
        self.family.as_ref()
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quad
    }

    pub fn uses_closed_form(&self) -> bool {
        self.closed_form
    }

    /// The path integral of `model` across the jump `from → to`.
    pub fn integrate<S>(&self, model: &S, from: &State<M>, to: &State<M>) -> Result<State<M>>
    where
        S: SystemModel<M> + ?Sized,
    {
        if self.closed_form && self.family.is_segment() {
            if let Some(exact) = model.closed_form_path_integral(from, to) {
                return exact;
            }
        }
        path_integral(|u| model.matrix(u), self.family.as_ref(), from, to, &self.quad)
    }

    /// Same integral along the reverse family, i.e. `−∫ from → to` for `to → from`.
    pub fn integrate_reversed<S>(&self, model: &S, from: &State<M>, to: &State<M>) -> Result<State<M>>
    where
        S: SystemModel<M> + ?Sized,
    {
        let reversed = Reversed(FamilyRef(self.family.as_ref()));
        path_integral(|u| model.matrix(u), &reversed, from, to, &self.quad)
    }
}

struct FamilyRef<'a, const M: usize>(&'a dyn PathFamily<M>);

impl<const M: usize> PathFamily<M> for FamilyRef<'_, M> {
    fn point(&self, s: f64, from: &State<M>, to: &State<M>) -> State<M> {
        self.0.point(s, from, to)
    }
    fn tangent(&self, s: f64, from: &State<M>, to: &State<M>) -> State<M> {
        self.0.tangent(s, from, to)
    }
    fn is_segment(&self) -> bool {
        self.0.is_segment()
    }
    fn name(&self) -> String {
        self.0.name()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{BloodVessel, TwoLayerSwe};
    use nalgebra::{matrix, vector};

    /// A curved family for exercising the generic machinery:
    /// `Φ(s) = W⁻ + s (W⁺ − W⁻) + s (1 − s) |W⁺ − W⁻| e₁`.
    struct Bent;

    impl PathFamily<2> for Bent {
        fn point(&self, s: f64, a: &State<2>, b: &State<2>) -> State<2> {
            let d = b - a;
            a + d * s + vector![1.0, 0.0] * (s * (1.0 - s) * d.norm())
        }
        fn tangent(&self, s: f64, a: &State<2>, b: &State<2>) -> State<2> {
            let d = b - a;
            d + vector![1.0, 0.0] * ((1.0 - 2.0 * s) * d.norm())
        }
        fn name(&self) -> String {
            "bent".into()
        }
    }

    #[test]
    fn segment_endpoints_are_exact() {
        let a = vector![0.3, -1.7, 2.2, 1e-3];
        let b = vector![1.1, 0.4, -0.9, 7.0];
        assert_eq!(PathFamily::<4>::point(&SegmentPath, 0.0, &a, &b), a);
        assert_eq!(PathFamily::<4>::point(&SegmentPath, 1.0, &a, &b), b);
        assert_eq!(PathFamily::<4>::tangent(&SegmentPath, 0.3, &a, &a), State::<4>::zeros());
    }

    #[test]
    fn reversed_segment() {
        let u1 = vector![5.0, 0.0];
        let u2 = vector![5.5, 0.2];
        let rev: &dyn PathFamily<2> = &reverse_family(SegmentPath);
        assert_eq!(rev.point(0.0, &u1, &u2), u1);
        assert_eq!(rev.point(1.0, &u1, &u2), u2);
        let t = rev.tangent(0.37, &u1, &u2);
        assert!((t - (u2 - u1)).amax() < 1e-15);
    }

    #[test]
    fn reversed_integral_is_antisymmetric_for_any_matrix() {
        let a = |u: &State<2>| -> Result<Matrix<2>> { Ok(matrix![u[0] * u[1], u[1].sin(); u[0].exp(), 1.0 / u[0]]) };
        let q = gauss_lobatto_5();
        let u1 = vector![1.3, -0.4];
        let u2 = vector![2.1, 0.9];
        for fam in [&Bent as &dyn PathFamily<2>, &SegmentPath] {
            let fwd = path_integral(a, fam, &u1, &u2, &q).unwrap();
            let rev = path_integral(a, &Reversed(FamilyRef(fam)), &u2, &u1, &q).unwrap();
            assert!((fwd + rev).amax() < 1e-12, "{}: {fwd} vs {rev}", fam.name());
        }
    }

    #[test]
    fn zero_jump_gives_zero() {
        let swe = TwoLayerSwe::default();
        let u = vector![0.7, 0.1, 1.3, -0.2];
        let p = PathIntegrator::segment();
        assert_eq!(p.integrate(&swe, &u, &u).unwrap(), State::<4>::zeros());
    }

    #[test]
    fn blood_example_values() {
        let vessel = BloodVessel::new(1.0, 0.005 * std::f64::consts::PI.sqrt());
        let p = PathIntegrator::segment();
        let r = p.integrate(&vessel, &vector![5.0, 0.0], &vector![5.0, 0.1]).unwrap();
        assert!((r[0] - 0.5).abs() < 1e-14);
        assert!((r[1] - 0.005).abs() < 1e-14);
    }

    #[test]
    fn node_outside_admissible_set_is_rejected() {
        let vessel = BloodVessel::new(1.0, 0.01);
        // The bent path dips below a = 0 between two admissible endpoints.
        let from = vector![0.05, 0.0];
        let to = vector![0.06, -5.0];
        struct Dip;
        impl PathFamily<2> for Dip {
            fn point(&self, s: f64, a: &State<2>, b: &State<2>) -> State<2> {
                a + (b - a) * s - vector![1.0, 0.0] * (s * (1.0 - s))
            }
            fn tangent(&self, s: f64, a: &State<2>, b: &State<2>) -> State<2> {
                (b - a) - vector![1.0, 0.0] * (1.0 - 2.0 * s)
            }
            fn name(&self) -> String {
                "dip".into()
            }
        }
        let err = path_integral(|u| vessel.matrix(u), &Dip, &from, &to, &gauss_lobatto_5());
        assert!(matches!(err, Err(crate::Error::NonAdmissibleState { .. })));
    }
}
