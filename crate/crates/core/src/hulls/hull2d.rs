//! Planar convex hulls by Andrew's monotone chain.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::vector::{approx_eq_vec, cross, dot, lex_cmp, sub};

/// A convex polygon in strictly convex position, counterclockwise, starting
/// at its lexicographically smallest vertex. One vertex is a point, two a segment.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope2D<F> {
    vertices: Vec<Vec<F>>,
}

impl<F: Field> Polytope2D<F> {
    pub fn vertices(&self) -> &[Vec<F>] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Half-plane membership; boundary points are inside.
    pub fn contains(&self, p: &[F]) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => approx_eq_vec(&self.vertices[0], p),
            2 => on_segment(&self.vertices[0], &self.vertices[1], p),
            n => (0..n).all(|i| {
                let a = &self.vertices[i];
                let b = &self.vertices[(i + 1) % n];
                !cross(&sub(b, a), &sub(p, a)).is_negative()
            }),
        }
    }

    /// Edges as vertex pairs in counterclockwise order (a segment yields one edge).
    pub fn edges(&self) -> Vec<(&[F], &[F])> {
        let v = &self.vertices;
        match v.len() {
            0 | 1 => Vec::new(),
            2 => vec![(&v[0][..], &v[1][..])],
            n => (0..n).map(|i| (&v[i][..], &v[(i + 1) % n][..])).collect(),
        }
    }
}

pub(crate) fn on_segment<F: Field>(a: &[F], b: &[F], p: &[F]) -> bool {
    let ab = sub(b, a);
    let ap = sub(p, a);
    if !cross(&ab, &ap).is_zero() {
        return false;
    }
    let t = dot(&ap, &ab);
    !t.is_negative() && t.cmp_tol(&dot(&ab, &ab)) != Ordering::Greater
}

/// Convex hull of a finite planar point set; collinear boundary points are dropped.
pub fn convex_hull_2d<F: Field>(points: &[Vec<F>]) -> Result<Polytope2D<F>> {
    if let Some(p) = points.iter().find(|p| p.len() != 2) {
        return Err(Error::DimensionMismatch { expected: 2, found: p.len() });
    }
    let mut pts: Vec<Vec<F>> = points.to_vec();
    pts.sort_by(|a, b| lex_cmp(a, b));
    pts.dedup_by(|a, b| approx_eq_vec(a, b));
    if pts.len() <= 2 {
        return Ok(Polytope2D { vertices: pts });
    }

    let turn = |o: &[F], a: &[F], b: &[F]| cross(&sub(a, o), &sub(b, o));
    let mut lower: Vec<Vec<F>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<F>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // All points collinear: the chains collapse onto the two extremes.
    if lower.len() == 2 && approx_eq_vec(&lower[0], &lower[1]) {
        lower.pop();
    }
    Ok(Polytope2D { vertices: lower })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};

    fn pts(v: &[(i64, i64)]) -> Vec<Vec<Rational>> {
        v.iter().map(|&(x, y)| vec![rational(x, 1), rational(y, 1)]).collect()
    }

    #[test]
    fn triangle_of_k1_generators() {
        let hull = convex_hull_2d(&pts(&[(1, 0), (-1, 1), (-1, -1)])).unwrap();
        assert_eq!(hull.vertices(), pts(&[(-1, -1), (1, 0), (-1, 1)]).as_slice());
    }

    #[test]
    fn collinear_input_gives_segment() {
        let hull = convex_hull_2d(&pts(&[(-1, 0), (-1, 1), (-1, -1)])).unwrap();
        assert_eq!(hull.vertices(), pts(&[(-1, -1), (-1, 1)]).as_slice());
        assert!(hull.contains(&pts(&[(-1, 0)])[0]));
    }

    #[test]
    fn single_point_and_duplicates() {
        let hull = convex_hull_2d(&pts(&[(0, 0), (0, 0)])).unwrap();
        assert_eq!(hull.vertices().len(), 1);
    }

    #[test]
    fn square_drops_edge_midpoints() {
        let hull = convex_hull_2d(&pts(&[(0, 0), (1, 0), (2, 0), (2, 2), (0, 2), (1, 1)])).unwrap();
        assert_eq!(hull.vertices(), pts(&[(0, 0), (2, 0), (2, 2), (0, 2)]).as_slice());
        assert!(hull.contains(&pts(&[(1, 0)])[0]));
        assert!(!hull.contains(&pts(&[(3, 0)])[0]));
    }

    #[test]
    fn rejects_other_dimensions() {
        let p = vec![vec![rational(1, 1), rational(0, 1), rational(0, 1)]];
        assert!(convex_hull_2d(&p).is_err());
    }
}
