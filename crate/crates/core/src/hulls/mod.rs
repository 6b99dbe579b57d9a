//! Conical, positive and convex hulls of finite point sets.

pub mod hull2d;
pub mod simplex;
pub mod sphere_cut;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::norm::SourceNorm;
use crate::scalar::{Field, Scalar};
use crate::vector::{approx_eq_vec, dot, is_zero_vec, same_ray};

pub use hull2d::{convex_hull_2d, Polytope2D};
pub use simplex::{feasibility, Feasibility};
pub use sphere_cut::{polytope_sphere_intersection_2d, SphereSegment, SphereSet};

/// A finite point set of one dimension. Duplicates are removed on
/// construction, keeping the first occurrence, so indices stay stable.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<F> {
    dim: usize,
    points: Vec<Vec<F>>,
}

impl<F: Field> PointSet<F> {
    pub fn new(points: Vec<Vec<F>>) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidInput("point sets need at least one point; use PointSet::empty".into()))?;
        Self::with_dim(dim, points)
    }

    pub fn empty(dim: usize) -> Self {
        PointSet { dim, points: Vec::new() }
    }

    pub fn with_dim(dim: usize, points: Vec<Vec<F>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        let mut kept: Vec<Vec<F>> = Vec::with_capacity(points.len());
        for p in points {
            crate::error::check_dim(dim, p.len())?;
            if !kept.iter().any(|q| approx_eq_vec(q, &p)) {
                kept.push(p);
            }
        }
        Ok(PointSet { dim, points: kept })
    }

    /// Skips deduplication; for mode conversions of an already canonical set.
    pub(crate) fn from_parts(dim: usize, points: Vec<Vec<F>>) -> Self {
        PointSet { dim, points }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<F>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains_origin(&self) -> bool {
        self.points.iter().any(|p| is_zero_vec(p))
    }
}

/// A finite union of open rays `{λx : λ > 0}`, optionally with the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct RayUnion<F> {
    pub dim: usize,
    pub directions: Vec<Vec<F>>,
    pub origin: bool,
}

impl<F: Field> RayUnion<F> {
    pub fn contains(&self, x: &[F]) -> bool {
        if is_zero_vec(x) {
            return self.origin;
        }
        self.directions.iter().any(|g| same_ray(x, g))
    }
}

fn ray_union<F: Field>(x: &PointSet<F>, origin: bool) -> RayUnion<F> {
    let mut directions: Vec<Vec<F>> = Vec::new();
    for p in x.points().iter().filter(|p| !is_zero_vec(p)) {
        if !directions.iter().any(|g| same_ray(p, g)) {
            directions.push(p.clone());
        }
    }
    RayUnion { dim: x.dim(), directions, origin }
}

/// `{λx : x ∈ X, λ > 0}`; contains the origin only when `0 ∈ X`.
pub fn conical_hull<F: Field>(x: &PointSet<F>) -> RayUnion<F> {
    ray_union(x, x.contains_origin())
}

/// `{λx : x ∈ X, λ ≥ 0}`, which always contains the origin.
pub fn positive_hull<F: Field>(x: &PointSet<F>) -> RayUnion<F> {
    ray_union(x, true)
}

/// Evidence for or against `0 ∈ conv(X)`.
#[derive(Debug, Clone, PartialEq)]
pub enum HullCertificate<F> {
    /// Nonzero convex weights by point index.
    Combination { weights: Vec<(usize, F)> },
    /// `⟨a, x⟩ ≤ b` on the set while `⟨a, 0⟩ = 0 > b`.
    Separator { a: Vec<F>, b: F },
}

impl<F: Field> HullCertificate<F> {
    pub fn is_combination(&self) -> bool {
        matches!(self, HullCertificate::Combination { .. })
    }

    /// Rechecks the certificate against `points` by direct arithmetic.
    pub fn verify(&self, points: &[Vec<F>]) -> bool {
        match self {
            HullCertificate::Combination { weights } => {
                let Some(d) = points.first().map(Vec::len) else {
                    return false;
                };
                if weights.iter().any(|(i, w)| *i >= points.len() || w.is_negative()) {
                    return false;
                }
                let total = weights.iter().fold(F::zero(), |acc, (_, w)| acc + w.clone());
                let mut sum = vec![F::zero(); d];
                for (i, w) in weights {
                    for (s, c) in sum.iter_mut().zip(&points[*i]) {
                        *s = s.clone() + w.clone() * c.clone();
                    }
                }
                total.approx_eq(&F::one()) && is_zero_vec(&sum)
            }
            HullCertificate::Separator { a, b } => {
                b.is_negative() && points.iter().all(|x| x.len() == a.len() && !dot(a, x).cmp_tol(b).is_gt())
            }
        }
    }

    pub fn to_float(&self) -> HullCertificate<f64> {
        match self {
            HullCertificate::Combination { weights } => HullCertificate::Combination {
                weights: weights.iter().map(|(i, w)| (*i, w.to_f64())).collect(),
            },
            HullCertificate::Separator { a, b } => {
                HullCertificate::Separator { a: a.iter().map(Field::to_f64).collect(), b: b.to_f64() }
            }
        }
    }
}

impl<F: Field> Serialize for HullCertificate<F> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            HullCertificate::Combination { weights } => {
                let mut s = serializer.serialize_struct("HullCertificate", 2)?;
                s.serialize_field("kind", "combination")?;
                let w: Vec<(Scalar, usize)> = weights.iter().map(|(i, w)| (w.to_scalar(), *i)).collect();
                s.serialize_field("weights", &w)?;
                s.end()
            }
            HullCertificate::Separator { a, b } => {
                let mut s = serializer.serialize_struct("HullCertificate", 3)?;
                s.serialize_field("kind", "separator")?;
                let a: Vec<Scalar> = a.iter().map(Field::to_scalar).collect();
                s.serialize_field("a", &a)?;
                s.serialize_field("b", &b.to_scalar())?;
                s.end()
            }
        }
    }
}

/// Decides `0 ∈ conv(X)` by phase-one simplex on
/// `Σ α_i x_i = 0, Σ α_i = 1, α ≥ 0`. An empty set gives `false`.
pub fn origin_in_convex_hull<F: Field>(x: &PointSet<F>) -> (bool, HullCertificate<F>) {
    origin_in_hull_of(x.points(), x.dim())
}

pub(crate) fn origin_in_hull_of<F: Field>(points: &[Vec<F>], dim: usize) -> (bool, HullCertificate<F>) {
    if points.is_empty() {
        return (false, HullCertificate::Separator { a: vec![F::zero(); dim], b: -F::one() });
    }
    let n = points.len();
    let mut a: Vec<Vec<F>> = (0..dim).map(|k| points.iter().map(|p| p[k].clone()).collect()).collect();
    a.push(vec![F::one(); n]);
    let mut b = vec![F::zero(); dim];
    b.push(F::one());
    match feasibility(&a, &b) {
        Feasibility::Feasible(alpha) => {
            let weights = alpha.into_iter().enumerate().filter(|(_, w)| !w.is_zero()).collect();
            (true, HullCertificate::Combination { weights })
        }
        Feasibility::Infeasible(y) => {
            // ⟨a', x_i⟩ + t ≥ 0 with t < 0; dividing by t gives ⟨a' / t, x_i⟩ ≤ -1.
            let t = y[dim].clone();
            let a = y[..dim].iter().map(|v| v.clone() / t.clone()).collect();
            (false, HullCertificate::Separator { a, b: -F::one() })
        }
    }
}

/// `0 ∈ conv(X)` for `0 ∉ X`. The answer equals the one for the radially
/// projected set, since rescaling each weight by `1/‖x_i‖` and renormalizing
/// maps one combination to the other.
pub fn normalized_origin_membership_equivalence<F: Field>(x: &PointSet<F>, _n: &SourceNorm) -> Result<bool> {
    if x.contains_origin() {
        return Err(Error::InvalidInput("the origin must not belong to the set".into()));
    }
    Ok(origin_in_convex_hull(x).0)
}

/// Nonnegative weights with `Σ λ_i g_i = x`, if any.
pub fn conic_combination<F: Field>(generators: &[Vec<F>], x: &[F]) -> Option<Vec<F>> {
    if generators.is_empty() {
        return None;
    }
    let a: Vec<Vec<F>> = (0..x.len()).map(|k| generators.iter().map(|g| g[k].clone()).collect()).collect();
    match feasibility(&a, x) {
        Feasibility::Feasible(l) => {
            let ok = (0..x.len()).all(|k| dot(&a[k], &l).approx_eq(&x[k]));
            ok.then_some(l)
        }
        Feasibility::Infeasible(_) => None,
    }
}

/// Whether `x` lies in `conv(points)`.
pub fn in_convex_hull<F: Field>(points: &[Vec<F>], x: &[F]) -> bool {
    if points.is_empty() {
        return false;
    }
    let shifted: Vec<Vec<F>> = points.iter().map(|p| crate::vector::sub(p, x)).collect();
    origin_in_hull_of(&shifted, x.len()).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};
    use serde_json::json;

    fn set(v: &[(i64, i64)]) -> PointSet<Rational> {
        PointSet::new(v.iter().map(|&(x, y)| vec![rational(x, 1), rational(y, 1)]).collect()).unwrap()
    }

    #[test]
    fn conical_hull_is_a_union_of_rays() {
        let k = conical_hull(&set(&[(1, 0), (0, 1)]));
        assert!(!k.origin);
        assert!(k.contains(&[rational(3, 1), rational(0, 1)]));
        assert!(!k.contains(&[rational(1, 1), rational(1, 1)]));
        assert!(conical_hull(&set(&[(0, 0)])).contains(&[rational(0, 1), rational(0, 1)]));
    }

    #[test]
    fn positive_hull_adds_origin() {
        let empty = PointSet::<Rational>::empty(2);
        let h = positive_hull(&empty);
        assert!(h.origin && h.directions.is_empty());
        let r = positive_hull(&set(&[(-1, 1)]));
        assert!(r.contains(&[rational(-2, 1), rational(2, 1)]));
        assert!(!r.contains(&[rational(1, 1), rational(-1, 1)]));
    }

    #[test]
    fn k1_generators_contain_origin() {
        let x = set(&[(1, 0), (-1, 1), (-1, -1)]);
        let (inside, cert) = origin_in_convex_hull(&x);
        assert!(inside);
        assert!(cert.verify(x.points()));
        assert_eq!(
            cert,
            HullCertificate::Combination {
                weights: vec![(0, rational(1, 2)), (1, rational(1, 4)), (2, rational(1, 4))]
            }
        );
        assert_eq!(
            serde_json::to_value(&cert).unwrap(),
            json!({"kind": "combination", "weights": [["1/2", 0], ["1/4", 1], ["1/4", 2]]})
        );
    }

    #[test]
    fn k2_generators_are_separated() {
        let x = set(&[(-1, 0), (-1, 1), (-1, -1)]);
        let (inside, cert) = origin_in_convex_hull(&x);
        assert!(!inside);
        assert!(cert.verify(x.points()));
        let HullCertificate::Separator { a, b } = &cert else { panic!() };
        assert_eq!(b, &rational(-1, 1));
        assert!(a[0].is_positive());
    }

    #[test]
    fn origin_alone_and_empty() {
        let (inside, cert) = origin_in_convex_hull(&set(&[(0, 0)]));
        assert!(inside);
        assert_eq!(cert, HullCertificate::Combination { weights: vec![(0, rational(1, 1))] });
        let (inside, cert) = origin_in_convex_hull(&PointSet::<Rational>::empty(2));
        assert!(!inside);
        assert!(cert.verify(&[]));
    }

    #[test]
    fn normalization_equivalence_examples() {
        let n = SourceNorm::l2();
        assert!(normalized_origin_membership_equivalence(&set(&[(2, 0), (-3, 3), (-1, -1)]), &n).unwrap());
        assert!(!normalized_origin_membership_equivalence(&set(&[(-5, 0), (-2, 2)]), &n).unwrap());
        assert!(normalized_origin_membership_equivalence(&set(&[(1, 0), (-1, 0)]), &n).unwrap());
        assert!(normalized_origin_membership_equivalence(&set(&[(0, 0), (1, 0)]), &n).is_err());
    }

    #[test]
    fn duplicates_are_dropped() {
        assert_eq!(set(&[(1, 0), (1, 0), (0, 1)]).len(), 2);
    }

    #[test]
    fn conic_combination_of_quadrant() {
        let g = set(&[(1, 0), (0, 1)]);
        assert!(conic_combination(g.points(), &[rational(2, 1), rational(3, 1)]).is_some());
        assert!(conic_combination(g.points(), &[rational(-1, 1), rational(3, 1)]).is_none());
        assert!(in_convex_hull(g.points(), &[rational(1, 2), rational(1, 2)]));
        assert!(!in_convex_hull(g.points(), &[rational(1, 1), rational(1, 1)]));
    }
}
