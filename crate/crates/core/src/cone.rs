//! Representable cones and their structural predicates.

use crate::error::{check_dim, Error, Result};
use crate::hulls::{conic_combination, feasibility, origin_in_hull_of, Feasibility, PointSet};
use crate::linalg::{kernel_basis, mat_vec, rank, rref};
use crate::scalar::{Field, Rational, Scalar};
use crate::vector::{add, approx_eq_vec, is_zero_vec, same_ray, scale};

/// Optional lower and upper bounds on one coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct Bound<F> {
    pub lo: Option<F>,
    pub hi: Option<F>,
}

impl<F> Bound<F> {
    pub fn free() -> Self {
        Bound { lo: None, hi: None }
    }
}

/// The slice `{x : A x = b, x within bounds}` with `b ≠ 0`; the cone is `cone(slice)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSlice<F> {
    a: Vec<Vec<F>>,
    b: Vec<F>,
    bounds: Option<Vec<Bound<F>>>,
}

impl<F: Field> AffineSlice<F> {
    pub fn new(a: Vec<Vec<F>>, b: Vec<F>, bounds: Option<Vec<Bound<F>>>) -> Result<Self> {
        let d = a.first().map(Vec::len).ok_or_else(|| Error::InvalidInput("affine slices need at least one row".into()))?;
        if d == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        for row in &a {
            check_dim(d, row.len())?;
        }
        check_dim(a.len(), b.len())?;
        if is_zero_vec(&b) {
            return Err(Error::InvalidInput("b = 0 gives a linear subspace; describe it as a convex cone".into()));
        }
        if let Some(bs) = &bounds {
            check_dim(d, bs.len())?;
            if bs.iter().any(|bd| matches!((&bd.lo, &bd.hi), (Some(l), Some(h)) if l.cmp_tol(h).is_gt())) {
                return Err(Error::InvalidInput("a lower bound exceeds its upper bound".into()));
            }
        }
        let slice = AffineSlice { a, b, bounds };
        if slice.feasible_point().is_none() {
            return Err(Error::InvalidInput("the affine slice is empty".into()));
        }
        Ok(slice)
    }

    pub fn dim(&self) -> usize {
        self.a[0].len()
    }

    pub fn matrix(&self) -> &[Vec<F>] {
        &self.a
    }

    pub fn rhs(&self) -> &[F] {
        &self.b
    }

    pub fn bounds(&self) -> Option<&[Bound<F>]> {
        self.bounds.as_deref()
    }

    fn bound(&self, i: usize) -> Bound<F> {
        self.bounds.as_ref().map_or_else(Bound::free, |b| b[i].clone())
    }

    fn within_bounds(&self, x: &[F]) -> bool {
        (0..self.dim()).all(|i| {
            let b = self.bound(i);
            b.lo.is_none_or(|l| !x[i].cmp_tol(&l).is_lt()) && b.hi.is_none_or(|h| !x[i].cmp_tol(&h).is_gt())
        })
    }

    /// A point of the slice.
    pub fn feasible_point(&self) -> Option<Vec<F>> {
        let bounds: Vec<Bound<F>> = (0..self.dim()).map(|i| self.bound(i)).collect();
        box_feasible(&self.a, &self.b, &bounds)
    }

    /// A nonzero direction `r` with `A r = 0` along which the slice is unbounded.
    pub fn recession_direction(&self) -> Option<Vec<F>> {
        let d = self.dim();
        let signs: Vec<Bound<F>> = (0..d)
            .map(|i| {
                let b = self.bound(i);
                Bound { lo: b.lo.map(|_| F::zero()), hi: b.hi.map(|_| F::zero()) }
            })
            .collect();
        for k in 0..d {
            for s in [1, -1] {
                let mut rows = self.a.clone();
                let mut e = vec![F::zero(); d];
                e[k] = F::one();
                rows.push(e);
                let mut rhs = vec![F::zero(); self.a.len()];
                rhs.push(F::from_i64(s));
                if let Some(r) = box_feasible(&rows, &rhs, &signs) {
                    return Some(r);
                }
            }
        }
        None
    }

    pub fn is_bounded(&self) -> bool {
        self.recession_direction().is_none()
    }

    /// Whether `r` is a nonzero recession direction of the slice.
    pub fn verify_recession(&self, r: &[F]) -> bool {
        if r.len() != self.dim() || is_zero_vec(r) || !is_zero_vec(&mat_vec(&self.a, r)) {
            return false;
        }
        (0..self.dim()).all(|i| {
            let b = self.bound(i);
            b.lo.is_none_or(|_| !r[i].is_negative()) && b.hi.is_none_or(|_| !r[i].is_positive())
        })
    }

    /// Nontrivial lineality of the recession cone, i.e. a line inside the slice direction set.
    pub fn has_lineality(&self) -> bool {
        let d = self.dim();
        let mut rows = self.a.clone();
        for i in 0..d {
            let b = self.bound(i);
            if b.lo.is_some() || b.hi.is_some() {
                let mut e = vec![F::zero(); d];
                e[i] = F::one();
                rows.push(e);
            }
        }
        !kernel_basis(&rows, d).is_empty()
    }

    /// A feasible point plus, for each bounded coordinate, a point with that
    /// coordinate pinned to each of its bounds when one exists.
    pub fn support_points(&self) -> Vec<Vec<F>> {
        let mut out: Vec<Vec<F>> = self.feasible_point().into_iter().collect();
        let bounds: Vec<Bound<F>> = (0..self.dim()).map(|i| self.bound(i)).collect();
        for (i, b) in bounds.iter().enumerate() {
            for v in b.lo.iter().chain(&b.hi) {
                let mut pinned = bounds.clone();
                pinned[i] = Bound { lo: Some(v.clone()), hi: Some(v.clone()) };
                if let Some(p) = box_feasible(&self.a, &self.b, &pinned) {
                    if !out.iter().any(|q| approx_eq_vec(q, &p)) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }

    /// Vertices of a bounded slice, by enumerating active bound sets.
    pub fn vertices(&self) -> Result<Vec<Vec<F>>> {
        if !self.is_bounded() {
            return Err(Error::InvalidInput("an unbounded slice is not a polytope".into()));
        }
        let d = self.dim();
        let free = d - rank(&self.a);
        let bounded: Vec<usize> = (0..d).filter(|&i| self.bound(i).lo.is_some() || self.bound(i).hi.is_some()).collect();
        let mut out: Vec<Vec<F>> = Vec::new();
        for active in subsets(&bounded, free) {
            let mut choices: Vec<Vec<(usize, F)>> = vec![Vec::new()];
            for &i in &active {
                let b = self.bound(i);
                let vals: Vec<F> = b.lo.into_iter().chain(b.hi).collect();
                choices = choices
                    .into_iter()
                    .flat_map(|c| {
                        vals.iter().map(move |v| {
                            let mut c = c.clone();
                            c.push((i, v.clone()));
                            c
                        })
                    })
                    .collect();
            }
            for fixed in choices {
                let Some(x) = self.solve_with(&fixed) else { continue };
                if self.within_bounds(&x) && !out.iter().any(|p| approx_eq_vec(p, &x)) {
                    out.push(x);
                }
            }
        }
        Ok(out)
    }

    /// The unique solution of `A x = b` with the given coordinates fixed, if any.
    fn solve_with(&self, fixed: &[(usize, F)]) -> Option<Vec<F>> {
        let d = self.dim();
        let mut rows: Vec<Vec<F>> = self.a.iter().zip(&self.b).map(|(r, bi)| r.iter().cloned().chain([bi.clone()]).collect()).collect();
        for (i, v) in fixed {
            let mut e = vec![F::zero(); d + 1];
            e[*i] = F::one();
            e[d] = v.clone();
            rows.push(e);
        }
        let pivots = rref(&mut rows);
        if pivots.len() != d || pivots.contains(&d) {
            return None;
        }
        Some((0..d).map(|r| rows[r][d].clone()).collect())
    }

    /// `x ∈ cone(slice)`: solve `A x = λ b` for `λ > 0`, then check `x / λ`.
    pub fn cone_contains(&self, x: &[F]) -> bool {
        let k = (0..self.b.len())
            .max_by(|&i, &j| self.b[i].abs().partial_cmp(&self.b[j].abs()).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap();
        let ax = mat_vec(&self.a, x);
        let lambda = ax[k].clone() / self.b[k].clone();
        if !lambda.is_positive() {
            return false;
        }
        let consistent = ax.iter().zip(&self.b).all(|(v, bi)| v.approx_eq(&(lambda.clone() * bi.clone())));
        let inv = F::one() / lambda;
        consistent && self.within_bounds(&scale(x, &inv))
    }

    fn map<G: Field>(&self, f: &impl Fn(&F) -> G) -> AffineSlice<G> {
        AffineSlice {
            a: self.a.iter().map(|r| r.iter().map(f).collect()).collect(),
            b: self.b.iter().map(f).collect(),
            bounds: self.bounds.as_ref().map(|bs| {
                bs.iter().map(|bd| Bound { lo: bd.lo.as_ref().map(f), hi: bd.hi.as_ref().map(f) }).collect()
            }),
        }
    }
}

fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (k, &i) in items.iter().enumerate() {
        for mut rest in subsets(&items[k + 1..], size - 1) {
            rest.insert(0, i);
            out.push(rest);
        }
    }
    out
}

/// Feasibility of `M x = c` with coordinatewise bounds, by substitution into
/// nonnegative variables.
fn box_feasible<F: Field>(m: &[Vec<F>], c: &[F], bounds: &[Bound<F>]) -> Option<Vec<F>> {
    let d = bounds.len();
    let mut x0 = vec![F::zero(); d];
    // Each column: (coordinate it moves, sign) or a pure slack (None).
    let mut cols: Vec<Option<(usize, F)>> = Vec::new();
    let mut caps: Vec<(usize, usize, F)> = Vec::new();
    for (i, bd) in bounds.iter().enumerate() {
        match (&bd.lo, &bd.hi) {
            (Some(l), Some(h)) => {
                x0[i] = l.clone();
                cols.push(Some((i, F::one())));
                cols.push(None);
                caps.push((cols.len() - 2, cols.len() - 1, h.clone() - l.clone()));
            }
            (Some(l), None) => {
                x0[i] = l.clone();
                cols.push(Some((i, F::one())));
            }
            (None, Some(h)) => {
                x0[i] = h.clone();
                cols.push(Some((i, -F::one())));
            }
            (None, None) => {
                cols.push(Some((i, F::one())));
                cols.push(Some((i, -F::one())));
            }
        }
    }
    let n = cols.len();
    let shift = mat_vec(m, &x0);
    let mut rows: Vec<Vec<F>> = Vec::new();
    let mut rhs: Vec<F> = Vec::new();
    for (r, row) in m.iter().enumerate() {
        rows.push(cols.iter().map(|col| col.as_ref().map_or(F::zero(), |(i, s)| row[*i].clone() * s.clone())).collect());
        rhs.push(c[r].clone() - shift[r].clone());
    }
    for (u, s, width) in caps {
        let mut row = vec![F::zero(); n];
        row[u] = F::one();
        row[s] = F::one();
        rows.push(row);
        rhs.push(width);
    }
    match feasibility(&rows, &rhs) {
        Feasibility::Feasible(z) => {
            let mut x = x0;
            for (col, zv) in cols.iter().zip(z) {
                if let Some((i, s)) = col {
                    x[*i] = x[*i].clone() + s.clone() * zv;
                }
            }
            Some(x)
        }
        Feasibility::Infeasible(_) => None,
    }
}

/// A cone in one of the representable classes.
#[derive(Debug, Clone, PartialEq)]
pub enum ConeSpec<F> {
    /// `cone(G)`: the union of the open rays through the generators.
    RayFan { generators: PointSet<F>, include_origin: bool },
    /// Nonnegative combinations of the generators, not all coefficients zero.
    ConvexCone { generators: PointSet<F>, include_origin: bool },
    /// `cone(conv(V))` for a polytope with vertices `V`.
    PolytopeCone { vertices: PointSet<F>, include_origin: bool },
    AffineSlice(AffineSlice<F>),
    /// Finite union of generator-based cones.
    Union(Vec<ConeSpec<F>>),
}

fn reject_zero<F: Field>(p: &PointSet<F>, what: &str) -> Result<()> {
    if p.contains_origin() {
        return Err(Error::InvalidInput(format!("{what} must be nonzero; use include_origin for the origin")));
    }
    Ok(())
}

impl<F: Field> ConeSpec<F> {
    pub fn ray_fan(generators: PointSet<F>, include_origin: bool) -> Result<Self> {
        reject_zero(&generators, "ray fan generators")?;
        Ok(ConeSpec::RayFan { generators, include_origin })
    }

    /// Zero generators are dropped; they only put the origin in the cone.
    pub fn convex_cone(generators: PointSet<F>, include_origin: bool) -> Result<Self> {
        let has_zero = generators.contains_origin();
        let dim = generators.dim();
        let kept = generators.points().iter().filter(|p| !is_zero_vec(p)).cloned().collect();
        Ok(ConeSpec::ConvexCone { generators: PointSet::with_dim(dim, kept)?, include_origin: include_origin || has_zero })
    }

    pub fn polytope_cone(vertices: PointSet<F>, include_origin: bool) -> Result<Self> {
        reject_zero(&vertices, "polytope vertices")?;
        if vertices.is_empty() {
            return Err(Error::InvalidInput("polytope cones need at least one vertex".into()));
        }
        Ok(ConeSpec::PolytopeCone { vertices, include_origin })
    }

    pub fn affine_slice(slice: AffineSlice<F>) -> Self {
        ConeSpec::AffineSlice(slice)
    }

    /// Nested unions are flattened; affine slices are not allowed inside.
    pub fn union(members: Vec<ConeSpec<F>>) -> Result<Self> {
        let mut flat = Vec::new();
        for m in members {
            match m {
                ConeSpec::Union(inner) => flat.extend(inner),
                ConeSpec::AffineSlice(_) => {
                    return Err(Error::Unsupported("affine slices cannot be members of a union".into()))
                }
                other => flat.push(other),
            }
        }
        let d = flat.first().map(ConeSpec::dim).ok_or_else(|| Error::InvalidInput("empty union".into()))?;
        for m in &flat {
            check_dim(d, m.dim())?;
        }
        Ok(ConeSpec::Union(flat))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ConeSpec::RayFan { .. } => "ray_fan",
            ConeSpec::ConvexCone { .. } => "convex_cone",
            ConeSpec::PolytopeCone { .. } => "polytope_cone",
            ConeSpec::AffineSlice(_) => "affine_slice",
            ConeSpec::Union(_) => "union",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ConeSpec::RayFan { generators, .. } | ConeSpec::ConvexCone { generators, .. } => generators.dim(),
            ConeSpec::PolytopeCone { vertices, .. } => vertices.dim(),
            ConeSpec::AffineSlice(s) => s.dim(),
            ConeSpec::Union(m) => m[0].dim(),
        }
    }

    /// Nonzero generators of every member; `None` for affine slices.
    pub fn generators(&self) -> Option<Vec<Vec<F>>> {
        match self {
            ConeSpec::RayFan { generators, .. } | ConeSpec::ConvexCone { generators, .. } => {
                Some(generators.points().to_vec())
            }
            ConeSpec::PolytopeCone { vertices, .. } => Some(vertices.points().to_vec()),
            ConeSpec::AffineSlice(_) => None,
            ConeSpec::Union(m) => {
                let mut all = Vec::new();
                for g in m.iter().filter_map(ConeSpec::generators) {
                    all.extend(g);
                }
                Some(all)
            }
        }
    }

    pub fn contains(&self, x: &[F]) -> Result<bool> {
        check_dim(self.dim(), x.len())?;
        if is_zero_vec(x) {
            return Ok(self.origin_status());
        }
        Ok(match self {
            ConeSpec::RayFan { generators, .. } => generators.points().iter().any(|g| same_ray(x, g)),
            ConeSpec::ConvexCone { generators, .. } => conic_combination(generators.points(), x).is_some(),
            ConeSpec::PolytopeCone { vertices, .. } => conic_combination(vertices.points(), x).is_some(),
            ConeSpec::AffineSlice(s) => s.cone_contains(x),
            ConeSpec::Union(m) => {
                for k in m {
                    if k.contains(x)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    /// Whether `0 ∈ K`.
    pub fn origin_status(&self) -> bool {
        match self {
            ConeSpec::RayFan { include_origin, .. } => *include_origin,
            ConeSpec::ConvexCone { generators: g, include_origin }
            | ConeSpec::PolytopeCone { vertices: g, include_origin } => {
                *include_origin || (!g.is_empty() && origin_in_hull_of(g.points(), g.dim()).0)
            }
            ConeSpec::AffineSlice(_) => false,
            ConeSpec::Union(m) => m.iter().any(ConeSpec::origin_status),
        }
    }

    /// Whether `K ∪ {0}` is closed.
    pub fn union_origin_closed(&self) -> bool {
        match self {
            ConeSpec::AffineSlice(s) => s.is_bounded(),
            ConeSpec::Union(m) => m.iter().all(ConeSpec::union_origin_closed),
            _ => true,
        }
    }

    /// Whether `0` lies in the closed convex hull of `ρ(K)`.
    pub fn origin_in_closed_hull_of_projection(&self) -> bool {
        match self {
            ConeSpec::AffineSlice(s) => s.has_lineality(),
            _ => {
                let g = self.generators().unwrap_or_default();
                self.origin_status() || (!g.is_empty() && origin_in_hull_of(&g, self.dim()).0)
            }
        }
    }

    /// `0 ∈ K ⟺ 0 ∈ cch(ρ(K))`.
    pub fn origin_agreement(&self) -> bool {
        self.origin_status() == self.origin_in_closed_hull_of_projection()
    }

    /// Distinct rays of a fan, one representative each.
    fn distinct_rays(g: &[Vec<F>]) -> Vec<Vec<F>> {
        let mut rays: Vec<Vec<F>> = Vec::new();
        for p in g {
            if !rays.iter().any(|r| same_ray(r, p)) {
                rays.push(p.clone());
            }
        }
        rays
    }

    fn fan_is_convex(g: &[Vec<F>], include_origin: bool) -> bool {
        let rays = Self::distinct_rays(g);
        match rays.len() {
            0 | 1 => true,
            2 => include_origin && same_ray(&rays[0], &scale(&rays[1], &-F::one())),
            _ => false,
        }
    }

    /// Index of a convex member containing every other member, if any.
    fn covering_member(members: &[ConeSpec<F>]) -> Option<usize> {
        let origin = members.iter().any(ConeSpec::origin_status);
        members.iter().position(|m| {
            matches!(m.is_convex(), Ok(true))
                && (!origin || m.origin_status())
                && members.iter().filter_map(ConeSpec::generators).flatten().all(|g| m.contains(&g).unwrap_or(false))
        })
    }

    /// Convexity of `K` itself. Unions are decided when one member covers the
    /// rest or a failing midpoint is found; other unions are unsupported.
    pub fn is_convex(&self) -> Result<bool> {
        match self {
            ConeSpec::RayFan { generators, include_origin } => {
                Ok(Self::fan_is_convex(generators.points(), *include_origin))
            }
            ConeSpec::ConvexCone { .. } | ConeSpec::PolytopeCone { .. } | ConeSpec::AffineSlice(_) => Ok(true),
            ConeSpec::Union(m) => {
                if m.len() == 1 {
                    return m[0].is_convex();
                }
                if m.iter().all(|k| matches!(k, ConeSpec::RayFan { .. })) {
                    let g = self.generators().unwrap_or_default();
                    return Ok(Self::fan_is_convex(&g, self.origin_status()));
                }
                if Self::covering_member(m).is_some() {
                    return Ok(true);
                }
                let g = self.generators().unwrap_or_default();
                for (i, a) in g.iter().enumerate() {
                    for b in &g[i + 1..] {
                        if !self.contains(&add(a, b))? {
                            return Ok(false);
                        }
                    }
                }
                Err(Error::Unsupported("convexity of this union is not decided".into()))
            }
        }
    }

    /// `K ∩ (−K) ⊆ {0}`; defined for convex cones only.
    pub fn is_pointed(&self) -> Result<bool> {
        if !self.is_convex()? {
            return Err(Error::Unsupported("pointedness is only defined here for convex cones".into()));
        }
        match self {
            ConeSpec::RayFan { generators, .. } => Ok(Self::distinct_rays(generators.points()).len() <= 1),
            ConeSpec::ConvexCone { generators: g, .. } | ConeSpec::PolytopeCone { vertices: g, .. } => {
                Ok(g.is_empty() || !origin_in_hull_of(g.points(), g.dim()).0)
            }
            ConeSpec::AffineSlice(_) => Ok(true),
            ConeSpec::Union(m) => {
                if m.len() == 1 {
                    return m[0].is_pointed();
                }
                let g = self.generators().unwrap_or_default();
                if m.iter().all(|k| matches!(k, ConeSpec::RayFan { .. })) {
                    return Ok(Self::distinct_rays(&g).len() <= 1);
                }
                match Self::covering_member(m) {
                    Some(i) => m[i].is_pointed(),
                    None => Err(Error::Unsupported("pointedness of this union is not decided".into())),
                }
            }
        }
    }

    pub fn map<G: Field>(&self, f: &impl Fn(&F) -> G) -> ConeSpec<G> {
        let pts = |p: &PointSet<F>| {
            PointSet::<G>::from_parts(p.dim(), p.points().iter().map(|v| v.iter().map(f).collect()).collect())
        };
        match self {
            ConeSpec::RayFan { generators, include_origin } => {
                ConeSpec::RayFan { generators: pts(generators), include_origin: *include_origin }
            }
            ConeSpec::ConvexCone { generators, include_origin } => {
                ConeSpec::ConvexCone { generators: pts(generators), include_origin: *include_origin }
            }
            ConeSpec::PolytopeCone { vertices, include_origin } => {
                ConeSpec::PolytopeCone { vertices: pts(vertices), include_origin: *include_origin }
            }
            ConeSpec::AffineSlice(s) => ConeSpec::AffineSlice(s.map(f)),
            ConeSpec::Union(m) => ConeSpec::Union(m.iter().map(|k| k.map(f)).collect()),
        }
    }

    pub fn to_float(&self) -> ConeSpec<f64> {
        self.map(&Field::to_f64)
    }
}

impl ConeSpec<f64> {
    /// Reads every float as the exact rational it encodes.
    pub fn to_exact(&self) -> Result<ConeSpec<Rational>> {
        let bad = self
            .generators()
            .unwrap_or_default()
            .iter()
            .flatten()
            .any(|v| !v.is_finite());
        if bad {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
        Ok(self.map(&|v: &f64| match Scalar::Float(*v).to_exact() {
            Ok(Scalar::Exact(q)) => q,
            _ => Rational::from_i64(0),
        }))
    }
}

/// A cone in either scalar mode.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyCone {
    Exact(ConeSpec<Rational>),
    Float(ConeSpec<f64>),
}

impl AnyCone {
    pub fn dim(&self) -> usize {
        match self {
            AnyCone::Exact(k) => k.dim(),
            AnyCone::Float(k) => k.dim(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            AnyCone::Exact(k) => k.kind_name(),
            AnyCone::Float(k) => k.kind_name(),
        }
    }

    pub fn to_float(&self) -> AnyCone {
        match self {
            AnyCone::Exact(k) => AnyCone::Float(k.to_float()),
            AnyCone::Float(_) => self.clone(),
        }
    }

    pub fn to_exact(&self) -> Result<AnyCone> {
        match self {
            AnyCone::Exact(_) => Ok(self.clone()),
            AnyCone::Float(k) => Ok(AnyCone::Exact(k.to_exact()?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn pts(v: &[(i64, i64)]) -> PointSet<Rational> {
        PointSet::new(v.iter().map(|&(x, y)| vec![rational(x, 1), rational(y, 1)]).collect()).unwrap()
    }

    fn q2(x: i64, y: i64) -> Vec<Rational> {
        vec![rational(x, 1), rational(y, 1)]
    }

    fn k1() -> ConeSpec<Rational> {
        ConeSpec::ray_fan(pts(&[(1, 0), (-1, 1), (-1, -1)]), false).unwrap()
    }

    fn k2() -> ConeSpec<Rational> {
        ConeSpec::ray_fan(pts(&[(-1, 0), (-1, 1), (-1, -1)]), false).unwrap()
    }

    fn slice(bounded: bool) -> AffineSlice<Rational> {
        let bounds = bounded.then(|| {
            vec![Bound { lo: Some(rational(1, 1)), hi: Some(rational(3, 1)) }; 2]
        });
        AffineSlice::new(vec![q2(1, 1)], vec![rational(4, 1)], bounds).unwrap()
    }

    #[test]
    fn ray_fan_membership() {
        let k = k1();
        assert!(k.contains(&q2(2, 0)).unwrap());
        assert!(!k.contains(&q2(0, 0)).unwrap());
        assert!(!k.contains(&q2(1, 1)).unwrap());
        assert!(k.contains(&[rational(1, 1)]).is_err());
    }

    #[test]
    fn polytope_cone_membership_float() {
        let s = 3f64.sqrt() / 2.0;
        let k3 = ConeSpec::polytope_cone(PointSet::new(vec![vec![0.5, s], vec![0.5, -s]]).unwrap(), false).unwrap();
        assert!(k3.contains(&[1.0, 0.0]).unwrap());
        assert!(!k3.contains(&[0.0, 1.0]).unwrap());
        assert!(!k3.origin_status());
        assert!(k3.is_convex().unwrap());
        assert!(k3.is_pointed().unwrap());
    }

    #[test]
    fn origin_status_cases() {
        assert!(!k2().origin_status());
        assert!(ConeSpec::ray_fan(pts(&[(1, 0)]), true).unwrap().origin_status());
        assert!(!ConeSpec::<Rational>::affine_slice(slice(false)).origin_status());
        // A line generated by opposite vectors contains the origin.
        assert!(ConeSpec::convex_cone(pts(&[(1, 0), (-1, 0)]), false).unwrap().origin_status());
    }

    #[test]
    fn closedness_of_slices() {
        assert!(k1().union_origin_closed());
        let open = ConeSpec::affine_slice(slice(false));
        assert!(!open.union_origin_closed());
        assert!(ConeSpec::affine_slice(slice(true)).union_origin_closed());
        let r = slice(false).recession_direction().unwrap();
        assert!(slice(false).verify_recession(&r));
        assert!(open.origin_in_closed_hull_of_projection());
        assert!(!ConeSpec::affine_slice(slice(true)).origin_in_closed_hull_of_projection());
    }

    #[test]
    fn slice_vertices() {
        let v = slice(true).vertices().unwrap();
        assert_eq!(v.len(), 2);
        assert!(v.contains(&q2(1, 3)) && v.contains(&q2(3, 1)));
        assert!(slice(false).vertices().is_err());
        let cube = vec![Bound { lo: Some(rational(0, 1)), hi: Some(rational(1, 1)) }; 3];
        let tri = AffineSlice::new(vec![vec![rational(1, 1); 3]], vec![rational(1, 1)], Some(cube)).unwrap();
        assert_eq!(tri.vertices().unwrap().len(), 3);
    }

    #[test]
    fn affine_cone_membership() {
        let k = ConeSpec::affine_slice(slice(true));
        assert!(k.contains(&q2(2, 6)).unwrap());
        assert!(!k.contains(&q2(0, 4)).unwrap());
        assert!(!k.contains(&q2(-1, -3)).unwrap());
        let open = ConeSpec::affine_slice(slice(false));
        assert!(open.contains(&q2(-1, 5)).unwrap());
        assert!(!open.contains(&q2(1, -1)).unwrap());
    }

    #[test]
    fn empty_and_degenerate_slices_rejected() {
        let b = vec![Bound { lo: Some(rational(0, 1)), hi: Some(rational(1, 1)) }; 2];
        assert!(AffineSlice::new(vec![q2(1, 1)], vec![rational(4, 1)], Some(b)).is_err());
        assert!(AffineSlice::new(vec![q2(1, 1)], vec![rational(0, 1)], None).is_err());
    }

    #[test]
    fn convexity() {
        assert!(!k2().is_convex().unwrap());
        assert!(ConeSpec::ray_fan(pts(&[(1, 1)]), false).unwrap().is_convex().unwrap());
        assert!(ConeSpec::ray_fan(pts(&[(1, 0), (-2, 0)]), true).unwrap().is_convex().unwrap());
        assert!(!ConeSpec::ray_fan(pts(&[(1, 0), (-2, 0)]), false).unwrap().is_convex().unwrap());
        assert!(k2().is_pointed().is_err());
    }

    #[test]
    fn pointedness() {
        assert!(!ConeSpec::convex_cone(pts(&[(1, 0), (-1, 0)]), false).unwrap().is_pointed().unwrap());
        assert!(ConeSpec::convex_cone(pts(&[(1, 0), (0, 1)]), false).unwrap().is_pointed().unwrap());
    }

    #[test]
    fn unions_of_axes() {
        let axis = |x, y| ConeSpec::convex_cone(pts(&[(x, y), (-x, -y)]), true).unwrap();
        let u = ConeSpec::union(vec![axis(1, 0), axis(0, 1)]).unwrap();
        assert!(u.contains(&q2(0, -3)).unwrap());
        assert!(!u.contains(&q2(1, 1)).unwrap());
        assert!(!u.is_convex().unwrap());
        assert!(u.origin_agreement());
        let plane = ConeSpec::convex_cone(pts(&[(1, 0), (-1, 0), (0, 1), (0, -1)]), true).unwrap();
        let covered = ConeSpec::union(vec![axis(1, 0), plane]).unwrap();
        assert!(covered.is_convex().unwrap());
        assert!(!covered.is_pointed().unwrap());
    }

    #[test]
    fn origin_agreement_for_k1_and_k2() {
        assert!(!k1().origin_agreement());
        assert!(k2().origin_agreement());
    }

    #[test]
    fn mode_conversion_round_trip() {
        let f = k1().to_float();
        assert!(f.contains(&[3.0, 0.0]).unwrap());
        assert_eq!(f.to_exact().unwrap(), k1());
    }
}
