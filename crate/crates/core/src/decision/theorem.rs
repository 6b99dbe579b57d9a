//! The exact planar test `ρ(K) = cch(ρ(K)) ∩ S^(0)` for polyhedral norms.

use crate::cone::ConeSpec;
use crate::error::{Error, Result};
use crate::hulls::sphere_cut::angle_cmp;
use crate::hulls::{convex_hull_2d, polytope_sphere_intersection_2d, Polytope2D, SphereSet};
use crate::norm::SourceNorm;
use crate::scalar::Field;
use crate::vector::{cross, dot, same_ray, scale};

/// Both sides of the planar characterization, with an excess point when they differ.
#[derive(Debug, Clone)]
pub struct TheoremTest<F> {
    /// `ρ(K)` as sphere segments, points and the origin flag.
    pub image: SphereSet<F>,
    /// `conv(ρ(K))`, which is closed since `ρ(K)` is a finite union of segments.
    pub hull: Polytope2D<F>,
    /// `cch(ρ(K)) ∩ S^(0)`.
    pub cut: SphereSet<F>,
    /// A point of `cut` outside `image`.
    pub excess: Option<Vec<F>>,
}

impl<F: Field> TheoremTest<F> {
    pub fn holds(&self) -> bool {
        self.excess.is_none()
    }
}

/// Distinct rays through `g`, sorted counterclockwise from the +x axis.
fn sorted_rays<F: Field>(g: &[Vec<F>]) -> Vec<Vec<F>> {
    let mut rays: Vec<Vec<F>> = Vec::new();
    for p in g {
        if !rays.iter().any(|r| same_ray(r, p)) {
            rays.push(p.clone());
        }
    }
    let east = vec![F::one(), F::zero()];
    rays.sort_by(|a, b| angle_cmp(&east, a, b));
    rays
}

/// `ρ` of a finitely generated convex cone: an arc, the whole sphere, or two antipodal points.
fn convex_image<F: Field>(g: &[Vec<F>], n: &SourceNorm, set: &mut SphereSet<F>) -> Result<()> {
    let rays = sorted_rays(g);
    let project = |v: &[F]| n.project(v).map(|p| p.expect("generators are nonzero"));
    match rays.len() {
        0 => return Ok(()),
        1 => {
            set.push_point(project(&rays[0])?);
            return Ok(());
        }
        2 if same_ray(&rays[0], &scale(&rays[1], &-F::one())) => {
            set.push_point(project(&rays[0])?);
            set.push_point(project(&rays[1])?);
            return Ok(());
        }
        _ => {}
    }
    // A counterclockwise gap of at least a half turn bounds the cone.
    let k = rays.len();
    for i in 0..k {
        let (u, w) = (&rays[i], &rays[(i + 1) % k]);
        let c = cross(u, w);
        if c.is_negative() || (c.is_zero() && dot(u, w).is_negative()) {
            return set.push_arc(n, w, u);
        }
    }
    let full = SphereSet::full(n, false)?;
    set.union(&full);
    Ok(())
}

fn push_image<F: Field>(k: &ConeSpec<F>, n: &SourceNorm, set: &mut SphereSet<F>) -> Result<()> {
    match k {
        ConeSpec::RayFan { generators, .. } => {
            for g in generators.points() {
                set.push_point(n.project(g)?.expect("generators are nonzero"));
            }
        }
        ConeSpec::ConvexCone { generators: g, .. } | ConeSpec::PolytopeCone { vertices: g, .. } => {
            convex_image(g.points(), n, set)?;
        }
        ConeSpec::AffineSlice(_) => {
            return Err(Error::Unsupported("the planar test does not take affine slices".into()));
        }
        ConeSpec::Union(members) => {
            for m in members {
                push_image(m, n, set)?;
            }
        }
    }
    Ok(())
}

/// `ρ(K)` for a planar cone under a polyhedral norm.
pub fn sphere_image_2d<F: Field>(k: &ConeSpec<F>, n: &SourceNorm) -> Result<SphereSet<F>> {
    if k.dim() != 2 {
        return Err(Error::Unsupported("the planar test needs dimension 2".into()));
    }
    let mut set = SphereSet::empty(n)?;
    push_image(k, n, &mut set)?;
    set.set_origin(k.origin_status());
    set.canonicalize();
    Ok(set)
}

/// Runs the planar characterization for `K` under the `ℓ1` or `ℓ∞` norm.
pub fn theorem_test_2d<F: Field>(k: &ConeSpec<F>, n: &SourceNorm) -> Result<TheoremTest<F>> {
    if !n.is_polyhedral() {
        return Err(Error::Unsupported("the planar test needs the l1 or linf norm".into()));
    }
    let image = sphere_image_2d(k, n)?;
    let mut pts: Vec<Vec<F>> = image.points().to_vec();
    for s in image.segments() {
        pts.push(s.start.clone());
        pts.push(s.end.clone());
    }
    if image.origin() {
        pts.push(vec![F::zero(), F::zero()]);
    }
    let hull = convex_hull_2d(&pts)?;
    let cut = polytope_sphere_intersection_2d(&hull, n)?;
    if image.excess_over(&cut).is_some() {
        return Err(Error::Inconsistent("the image of K is not contained in its hull cut".into()));
    }
    let excess = cut.excess_over(&image);
    Ok(TheoremTest { image, hull, cut, excess })
}
