//! Subsets of `S^(0)` for polyhedral norms in the plane.
//!
//! A [`SphereSet`] is a finite union of closed facet segments and isolated
//! points of the unit sphere, plus a flag for the origin. Its canonical form
//! merges overlapping segments on the same facet and drops points covered by
//! a segment, so two sets are equal exactly when their canonical forms are.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::hulls::hull2d::Polytope2D;
use crate::norm::SourceNorm;
use crate::scalar::Field;
use crate::vector::{approx_eq_vec, cross, dot, lex_cmp};

/// A closed piece of one facet; `start` and `end` run counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereSegment<F> {
    pub facet: usize,
    pub start: Vec<F>,
    pub end: Vec<F>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereSet<F> {
    normals: Vec<[F; 2]>,
    segments: Vec<SphereSegment<F>>,
    points: Vec<Vec<F>>,
    origin: bool,
}

fn tangent<F: Field>(n: &[F; 2]) -> [F; 2] {
    [-n[1].clone(), n[0].clone()]
}

fn param<F: Field>(n: &[F; 2], x: &[F]) -> F {
    dot(&tangent(n), x)
}

fn midpoint<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let two = F::from_i64(2);
    a.iter().zip(b).map(|(x, y)| (x.clone() + y.clone()) / two.clone()).collect()
}

/// Position of `v` measured counterclockwise from `from`, as a comparable key.
pub(crate) fn angle_cmp<F: Field>(from: &[F], a: &[F], b: &[F]) -> Ordering {
    let half = |v: &[F]| {
        let c = cross(from, v);
        if c.is_positive() || (c.is_zero() && dot(from, v).is_positive()) {
            0
        } else {
            1
        }
    };
    match half(a).cmp(&half(b)) {
        Ordering::Equal => match cross(a, b).sign() {
            Ordering::Greater => Ordering::Less,
            Ordering::Less => Ordering::Greater,
            Ordering::Equal => Ordering::Equal,
        },
        other => other,
    }
}

impl<F: Field> SphereSet<F> {
    pub fn empty(norm: &SourceNorm) -> Result<Self> {
        Ok(SphereSet { normals: norm.facet_normals_2d()?, segments: Vec::new(), points: Vec::new(), origin: false })
    }

    /// The whole sphere, optionally with the origin.
    pub fn full(norm: &SourceNorm, origin: bool) -> Result<Self> {
        let mut set = Self::empty(norm)?;
        let corners = norm.corners_2d::<F>()?;
        for i in 0..corners.len() {
            let a = corners[(i + corners.len() - 1) % corners.len()].to_vec();
            let b = corners[i].to_vec();
            set.push_segment(a, b)?;
        }
        set.origin = origin;
        set.canonicalize();
        Ok(set)
    }

    pub fn segments(&self) -> &[SphereSegment<F>] {
        &self.segments
    }

    pub fn points(&self) -> &[Vec<F>] {
        &self.points
    }

    pub fn origin(&self) -> bool {
        self.origin
    }

    pub fn set_origin(&mut self, origin: bool) {
        self.origin = origin;
    }

    pub fn normals(&self) -> &[[F; 2]] {
        &self.normals
    }

    /// Facets through `x` (one, or two at a corner).
    pub fn facets_of(&self, x: &[F]) -> Vec<usize> {
        self.normals
            .iter()
            .enumerate()
            .filter(|(_, n)| dot(&n[..], x).approx_eq(&F::one()))
            .map(|(k, _)| k)
            .collect()
    }

    pub fn push_point(&mut self, p: Vec<F>) {
        self.points.push(p);
    }

    /// Adds the segment `[a, b]`; both ends must lie on a common facet.
    pub fn push_segment(&mut self, a: Vec<F>, b: Vec<F>) -> Result<()> {
        if approx_eq_vec(&a, &b) {
            self.points.push(a);
            return Ok(());
        }
        let fa = self.facets_of(&a);
        let fb = self.facets_of(&b);
        let facet = fa
            .iter()
            .copied()
            .find(|k| fb.contains(k))
            .ok_or_else(|| Error::Inconsistent("segment endpoints do not share a facet".into()))?;
        let n = self.normals[facet].clone();
        let (start, end) = if param(&n, &a) <= param(&n, &b) { (a, b) } else { (b, a) };
        self.segments.push(SphereSegment { facet, start, end });
        Ok(())
    }

    /// Adds the counterclockwise arc from direction `from` to direction `to`
    /// (nonzero vectors, not necessarily normalized). Equal directions add one point.
    pub fn push_arc(&mut self, norm: &SourceNorm, from: &[F], to: &[F]) -> Result<()> {
        let start = norm.project(from)?.ok_or_else(|| Error::InvalidInput("zero arc endpoint".into()))?;
        let end = norm.project(to)?.ok_or_else(|| Error::InvalidInput("zero arc endpoint".into()))?;
        if angle_cmp(&start, &end, &start) == Ordering::Equal {
            self.points.push(start);
            return Ok(());
        }
        let mut corners: Vec<Vec<F>> = norm
            .corners_2d::<F>()?
            .into_iter()
            .map(|c| c.to_vec())
            .filter(|c| {
                angle_cmp(&start, c, &start) == Ordering::Greater && angle_cmp(&start, c, &end) == Ordering::Less
            })
            .collect();
        corners.sort_by(|a, b| angle_cmp(&start, a, b));
        let mut chain = vec![start];
        chain.extend(corners);
        chain.push(end);
        for w in chain.windows(2) {
            self.push_segment(w[0].clone(), w[1].clone())?;
        }
        Ok(())
    }

    pub fn union(&mut self, other: &SphereSet<F>) {
        self.segments.extend(other.segments.iter().cloned());
        self.points.extend(other.points.iter().cloned());
        self.origin |= other.origin;
    }

    fn on_segment(&self, s: &SphereSegment<F>, x: &[F]) -> bool {
        let n = &self.normals[s.facet];
        if !dot(&n[..], x).approx_eq(&F::one()) {
            return false;
        }
        let t = param(n, x);
        t.cmp_tol(&param(n, &s.start)) != Ordering::Less && t.cmp_tol(&param(n, &s.end)) != Ordering::Greater
    }

    /// Membership of a sphere point (or the origin, for the zero vector).
    pub fn contains(&self, x: &[F]) -> bool {
        if x.iter().all(Field::is_zero) {
            return self.origin;
        }
        self.points.iter().any(|p| approx_eq_vec(p, x)) || self.segments.iter().any(|s| self.on_segment(s, x))
    }

    /// Merges touching segments per facet, drops covered points, sorts.
    pub fn canonicalize(&mut self) {
        let mut merged: Vec<SphereSegment<F>> = Vec::new();
        let mut segs = std::mem::take(&mut self.segments);
        segs.sort_by(|a, b| {
            a.facet
                .cmp(&b.facet)
                .then_with(|| param(&self.normals[a.facet], &a.start).cmp_tol(&param(&self.normals[b.facet], &b.start)))
        });
        for s in segs {
            if let Some(last) = merged.last_mut() {
                let n = &self.normals[s.facet];
                if last.facet == s.facet && param(n, &s.start).cmp_tol(&param(n, &last.end)) != Ordering::Greater {
                    if param(n, &s.end).cmp_tol(&param(n, &last.end)) == Ordering::Greater {
                        last.end = s.end;
                    }
                    continue;
                }
            }
            merged.push(s);
        }
        self.segments = merged;

        let mut pts = std::mem::take(&mut self.points);
        pts.sort_by(|a, b| lex_cmp(a, b));
        pts.dedup_by(|a, b| approx_eq_vec(a, b));
        pts.retain(|p| !self.segments.iter().any(|s| self.on_segment(s, p)));
        self.points = pts;

        self.segments.sort_by(|a, b| lex_cmp(&a.start, &b.start).then_with(|| lex_cmp(&a.end, &b.end)));
    }

    /// Set equality of canonical forms (within tolerance in float mode).
    pub fn same_set(&self, other: &SphereSet<F>) -> bool {
        let mut a = self.clone();
        let mut b = other.clone();
        a.canonicalize();
        b.canonicalize();
        a.origin == b.origin
            && a.points.len() == b.points.len()
            && a.segments.len() == b.segments.len()
            && a.points.iter().zip(&b.points).all(|(p, q)| approx_eq_vec(p, q))
            && a.segments.iter().zip(&b.segments).all(|(s, t)| {
                s.facet == t.facet && approx_eq_vec(&s.start, &t.start) && approx_eq_vec(&s.end, &t.end)
            })
    }

    /// A point of `self` outside `other`, if any. The origin is reported first,
    /// then isolated points, then segment gaps scanned from the upper end.
    pub fn excess_over(&self, other: &SphereSet<F>) -> Option<Vec<F>> {
        if self.origin && !other.origin {
            return Some(vec![F::zero(), F::zero()]);
        }
        if let Some(p) = self.points.iter().find(|p| !other.contains(p)) {
            return Some(p.clone());
        }
        for s in &self.segments {
            if let Some(w) = self.segment_gap(s, other) {
                return Some(w);
            }
        }
        None
    }

    fn segment_gap(&self, s: &SphereSegment<F>, other: &SphereSet<F>) -> Option<Vec<F>> {
        let n = &self.normals[s.facet];
        // Sweep from the lexicographically larger endpoint towards the other one.
        let (top, bottom, sgn) = if lex_cmp(&s.end, &s.start) == Ordering::Greater {
            (&s.end, &s.start, F::one())
        } else {
            (&s.start, &s.end, -F::one())
        };
        let key = |x: &[F]| sgn.clone() * param(n, x);
        let lo = key(bottom);
        let hi = key(top);
        // Covered closed intervals of `other` on this facet, as (low, high) keys.
        let mut cover: Vec<(F, F, Vec<F>, Vec<F>)> = Vec::new();
        let mut add = |a: &Vec<F>, b: &Vec<F>| {
            let (ka, kb) = (key(a), key(b));
            if ka <= kb {
                cover.push((ka, kb, a.clone(), b.clone()));
            } else {
                cover.push((kb, ka, b.clone(), a.clone()));
            }
        };
        for t in other.segments.iter().filter(|t| t.facet == s.facet) {
            add(&t.start, &t.end);
        }
        for p in other.points.iter().filter(|p| self.on_segment(s, p)) {
            add(p, p);
        }
        cover.retain(|c| c.1.cmp_tol(&lo) != Ordering::Less && c.0.cmp_tol(&hi) != Ordering::Greater);
        cover.sort_by(|a, b| b.1.cmp_tol(&a.1));

        let mut cursor = hi;
        let mut cursor_pt = top.clone();
        for (c_lo, c_hi, c_lo_pt, c_hi_pt) in cover {
            if c_hi.cmp_tol(&cursor) == Ordering::Less {
                return Some(midpoint(&c_hi_pt, &cursor_pt));
            }
            if c_lo.cmp_tol(&cursor) == Ordering::Less {
                cursor = c_lo;
                cursor_pt = c_lo_pt;
            }
        }
        (cursor.cmp_tol(&lo) == Ordering::Greater).then(|| midpoint(bottom, &cursor_pt))
    }
}

/// Result of cutting a polytope contained in the unit ball with `S^(0)`.
pub fn polytope_sphere_intersection_2d<F: Field>(p: &Polytope2D<F>, norm: &SourceNorm) -> Result<SphereSet<F>> {
    if !norm.is_polyhedral() {
        return Err(Error::Unsupported("exact sphere cuts need the l1 or linf norm".into()));
    }
    for v in p.vertices() {
        if !norm.in_ball(v)? {
            return Err(Error::InvalidInput("polytope extends outside the unit ball".into()));
        }
    }
    let mut set = SphereSet::empty(norm)?;
    let origin = vec![F::zero(), F::zero()];
    set.origin = p.contains(&origin);
    // P lies in the ball, so on each facet line it touches the sphere in its
    // own face maximizing <n, .>: a vertex or an edge.
    for k in 0..set.normals.len() {
        let n = set.normals[k].clone();
        let touching: Vec<Vec<F>> =
            p.vertices().iter().filter(|v| dot(&n[..], v).approx_eq(&F::one())).cloned().collect();
        match touching.len() {
            0 => {}
            1 => set.points.push(touching[0].clone()),
            _ => {
                let mut ends = touching;
                ends.sort_by(|a, b| param(&n, a).cmp_tol(&param(&n, b)));
                let (a, b) = (ends[0].clone(), ends[ends.len() - 1].clone());
                set.segments.push(SphereSegment { facet: k, start: a, end: b });
            }
        }
    }
    set.canonicalize();
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hulls::hull2d::convex_hull_2d;
    use crate::scalar::{rational, Rational};

    fn pt(x: (i64, i64), y: (i64, i64)) -> Vec<Rational> {
        vec![rational(x.0, x.1), rational(y.0, y.1)]
    }

    fn ipt(x: i64, y: i64) -> Vec<Rational> {
        pt((x, 1), (y, 1))
    }

    #[test]
    fn k1_triangle_under_linf() {
        let hull = convex_hull_2d(&[ipt(1, 0), ipt(-1, 1), ipt(-1, -1)]).unwrap();
        let cut = polytope_sphere_intersection_2d(&hull, &SourceNorm::linf()).unwrap();
        assert!(cut.origin());
        assert_eq!(cut.segments().len(), 1);
        // Endpoints run counterclockwise along the facet.
        assert_eq!(cut.segments()[0].start, ipt(-1, 1));
        assert_eq!(cut.segments()[0].end, ipt(-1, -1));
        assert_eq!(cut.points(), &[ipt(1, 0)]);
    }

    #[test]
    fn single_point() {
        let hull = convex_hull_2d(&[ipt(1, 0)]).unwrap();
        let cut = polytope_sphere_intersection_2d(&hull, &SourceNorm::linf()).unwrap();
        assert!(!cut.origin());
        assert!(cut.segments().is_empty());
        assert_eq!(cut.points(), &[ipt(1, 0)]);
    }

    #[test]
    fn k3_quadrilateral_float_path() {
        let s = 1.0 / 3f64.sqrt();
        let v = vec![vec![s, 1.0], vec![s, -1.0], vec![1.0, -1.0], vec![1.0, 1.0]];
        let hull = convex_hull_2d(&v).unwrap();
        let cut = polytope_sphere_intersection_2d(&hull, &SourceNorm::linf()).unwrap();
        assert!(!cut.origin());
        assert_eq!(cut.segments().len(), 3);
        assert!(cut.points().is_empty());
    }

    #[test]
    fn outside_the_ball_is_rejected() {
        let hull = convex_hull_2d(&[ipt(2, 0), ipt(0, 1)]).unwrap();
        assert!(polytope_sphere_intersection_2d(&hull, &SourceNorm::linf()).is_err());
    }

    #[test]
    fn corner_vertex_counted_once() {
        let hull = convex_hull_2d(&[ipt(1, 1), pt((1, 2), (0, 1))]).unwrap();
        let cut = polytope_sphere_intersection_2d(&hull, &SourceNorm::linf()).unwrap();
        assert_eq!(cut.points(), &[ipt(1, 1)]);
    }

    #[test]
    fn arc_through_corners() {
        let n = SourceNorm::linf();
        let mut set = SphereSet::<Rational>::empty(&n).unwrap();
        set.push_arc(&n, &ipt(1, -2), &ipt(1, 2)).unwrap();
        set.canonicalize();
        assert_eq!(set.segments().len(), 3);
        assert!(set.contains(&ipt(1, 0)));
        assert!(set.contains(&pt((1, 2), (1, 1))));
        assert!(!set.contains(&pt((-1, 2), (1, 1))));
    }

    #[test]
    fn full_sphere_is_four_facets() {
        let set = SphereSet::<Rational>::full(&SourceNorm::l1(), true).unwrap();
        assert_eq!(set.segments().len(), 4);
        assert!(set.contains(&pt((1, 2), (1, 2))));
    }

    #[test]
    fn excess_scans_from_upper_end() {
        let n = SourceNorm::linf();
        let mut seg = SphereSet::<Rational>::empty(&n).unwrap();
        seg.push_segment(ipt(-1, -1), ipt(-1, 1)).unwrap();
        let mut pts = SphereSet::<Rational>::empty(&n).unwrap();
        for p in [ipt(-1, 0), ipt(-1, 1), ipt(-1, -1)] {
            pts.push_point(p);
        }
        pts.canonicalize();
        assert_eq!(seg.excess_over(&pts), Some(pt((-1, 1), (1, 2))));
        assert_eq!(pts.excess_over(&seg), None);
        assert!(!seg.same_set(&pts));
    }

    #[test]
    fn excess_with_uncovered_endpoint() {
        let n = SourceNorm::linf();
        let mut seg = SphereSet::<Rational>::empty(&n).unwrap();
        seg.push_segment(ipt(1, -1), ipt(1, 1)).unwrap();
        let mut part = SphereSet::<Rational>::empty(&n).unwrap();
        part.push_segment(ipt(1, -1), pt((1, 1), (1, 2))).unwrap();
        assert_eq!(seg.excess_over(&part), Some(pt((1, 1), (3, 4))));
        let mut lower_gap = SphereSet::<Rational>::empty(&n).unwrap();
        lower_gap.push_segment(ipt(1, 0), ipt(1, 1)).unwrap();
        assert_eq!(seg.excess_over(&lower_gap), Some(pt((1, 1), (-1, 2))));
    }
}
