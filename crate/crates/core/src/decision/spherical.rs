//! Spherical convexity of patches `ρ(conv P)` and the cones they span.

use crate::cone::ConeSpec;
use crate::decision::{decide_capra_convex, DecisionReport};
use crate::error::{Error, Result};
use crate::hulls::{origin_in_convex_hull, HullCertificate, PointSet};
use crate::norm::SourceNorm;
use crate::scalar::Field;

/// The sphere patch `ρ(conv P)` given by its generating polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalPatch<F> {
    pub polytope: PointSet<F>,
}

impl<F: Field> SphericalPatch<F> {
    pub fn new(polytope: PointSet<F>) -> Result<Self> {
        if polytope.is_empty() {
            return Err(Error::InvalidInput("a patch needs at least one point".into()));
        }
        Ok(SphericalPatch { polytope })
    }

    /// `posHull` of the patch, the convex cone generated by `P` with the origin.
    pub fn positive_hull(&self) -> Result<ConeSpec<F>> {
        ConeSpec::convex_cone(self.polytope.clone(), true)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphericalCheck<F> {
    pub spherically_convex: bool,
    pub convex: bool,
    pub pointed: bool,
    /// A separator when `0 ∉ conv(P)`, a combination otherwise.
    pub certificate: HullCertificate<F>,
}

/// The patch is spherically convex iff its positive hull is convex and pointed.
/// When `0 ∈ conv(P)` the hull contains a line and the answer is `false`.
pub fn is_spherically_convex<F: Field>(patch: &SphericalPatch<F>) -> Result<SphericalCheck<F>> {
    let cone = patch.positive_hull()?;
    let convex = cone.is_convex()?;
    let pointed = cone.is_pointed()?;
    let (_, certificate) = origin_in_convex_hull(&patch.polytope);
    Ok(SphericalCheck { spherically_convex: convex && pointed, convex, pointed, certificate })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphericalReports<F: Field> {
    /// The closed cone spanned by the patch.
    pub closed: DecisionReport<F>,
    /// The same cone without the origin, reported when it is pointed.
    pub minus_origin: Option<DecisionReport<F>>,
}

/// Capra-convexity of the closed cone over a spherically convex patch.
pub fn spherical_to_capra<F: Field>(patch: &SphericalPatch<F>, n: &SourceNorm) -> Result<SphericalReports<F>> {
    let check = is_spherically_convex(patch)?;
    if !check.spherically_convex {
        return Err(Error::InvalidInput("the patch is not spherically convex".into()));
    }
    let closed = decide_capra_convex(&patch.positive_hull()?, n)?;
    let without = ConeSpec::convex_cone(patch.polytope.clone(), false)?;
    let minus_origin = if check.pointed { Some(decide_capra_convex(&without, n)?) } else { None };
    Ok(SphericalReports { closed, minus_origin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::{Rule, Verdict};
    use crate::scalar::{rational, Rational};

    fn patch(v: &[(i64, i64)]) -> SphericalPatch<Rational> {
        let p = v.iter().map(|&(x, y)| vec![rational(x, 1), rational(y, 1)]).collect();
        SphericalPatch::new(PointSet::new(p).unwrap()).unwrap()
    }

    #[test]
    fn quarter_arc() {
        let q = patch(&[(1, 0), (0, 1)]);
        let c = is_spherically_convex(&q).unwrap();
        assert!(c.spherically_convex);
        assert!(c.certificate.verify(q.polytope.points()));
        let r = spherical_to_capra(&q, &SourceNorm::l2()).unwrap();
        assert_eq!((r.closed.verdict, r.closed.rule), (Verdict::CapraConvex, Rule::ClosedConvexCone));
        let m = r.minus_origin.unwrap();
        assert_eq!((m.verdict, m.rule), (Verdict::CapraConvex, Rule::PointedMinusOrigin));
    }

    #[test]
    fn more_than_half_a_circle() {
        let p = vec![
            vec![rational(1, 1), rational(0, 1)],
            vec![rational(-1, 1), rational(1, 100)],
            vec![rational(-1, 1), rational(-1, 100)],
        ];
        let wide = SphericalPatch::new(PointSet::new(p).unwrap()).unwrap();
        let c = is_spherically_convex(&wide).unwrap();
        assert!(!c.spherically_convex && !c.pointed);
        assert!(c.certificate.is_combination());
        assert!(spherical_to_capra(&wide, &SourceNorm::l2()).is_err());
    }

    #[test]
    fn singleton_arc() {
        let s = patch(&[(0, 1)]);
        assert!(is_spherically_convex(&s).unwrap().spherically_convex);
        let r = spherical_to_capra(&s, &SourceNorm::linf()).unwrap();
        assert_eq!(r.closed.verdict, Verdict::CapraConvex);
    }
}
