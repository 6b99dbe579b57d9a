//! Capra conjugates and biconjugates of functions sampled on finite grids.
//!
//! Values are extended reals stored as `f64` with `±∞`. Inside a supremum a
//! term `+∞ − (+∞)` never arises: points where the function is `+∞` are
//! skipped, and a value of `−∞` anywhere makes the conjugate `+∞`.

use std::fmt;
use std::sync::Arc;

use crate::cone::ConeSpec;
use crate::error::{Error, Result};
use crate::hulls::PointSet;
use crate::norm::SourceNorm;
use crate::par::map_indices;
use crate::sampling::sphere_samples;
use crate::scalar::{Field, Rational};
use crate::vector::dot;

/// Threshold below which a float coordinate counts as zero for `ℓ0`.
pub const L0_ZERO_TOL: f64 = 1e-12;
/// Rounding slack added to the biconjugate inequality on grid points.
pub const BICONJUGATE_SLACK: f64 = 1e-9;
/// Dual box half-width used when none is given.
pub const DEFAULT_DUAL_RADIUS: f64 = 3.0;
/// Dual points per axis used when none is given.
pub const DEFAULT_DUAL_RESOLUTION: usize = 201;

pub type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A function with a finite evaluation grid.
#[derive(Clone)]
pub struct SampledFunction {
    name: String,
    grid: Vec<Vec<f64>>,
    eval: Evaluator,
}

impl fmt::Debug for SampledFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledFunction").field("name", &self.name).field("grid", &self.grid.len()).finish()
    }
}

impl SampledFunction {
    pub fn new(name: impl Into<String>, grid: Vec<Vec<f64>>, eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        SampledFunction { name: name.into(), grid, eval: Arc::new(eval) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn grid(&self) -> &[Vec<f64>] {
        &self.grid
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }

    pub fn values(&self) -> Vec<f64> {
        self.grid.iter().map(|x| self.eval(x)).collect()
    }

    pub fn with_grid(&self, grid: Vec<Vec<f64>>) -> Self {
        SampledFunction { name: self.name.clone(), grid, eval: self.eval.clone() }
    }
}

/// `ι_X`: zero on `X`, `+∞` elsewhere.
pub fn indicator(
    name: impl Into<String>,
    grid: Vec<Vec<f64>>,
    member: impl Fn(&[f64]) -> bool + Send + Sync + 'static,
) -> SampledFunction {
    SampledFunction::new(name, grid, move |x| if member(x) { 0.0 } else { f64::INFINITY })
}

/// Indicator of a cone, with float membership.
pub fn cone_indicator<F: Field>(name: impl Into<String>, k: &ConeSpec<F>, grid: Vec<Vec<f64>>) -> SampledFunction {
    let kf = k.to_float();
    indicator(name, grid, move |x| kf.contains(x).unwrap_or(false))
}

/// `σ_X(y) = max_{x ∈ X} <x, y>`, and `−∞` for an empty set.
pub fn support_function(x: &[Vec<f64>], y: &[f64]) -> f64 {
    x.iter().map(|p| dot(p, y)).fold(f64::NEG_INFINITY, f64::max)
}

/// Number of nonzero coordinates, with [`L0_ZERO_TOL`].
pub fn l0(x: &[f64]) -> usize {
    x.iter().filter(|c| c.abs() > L0_ZERO_TOL).count()
}

pub fn l0_exact(x: &[Rational]) -> usize {
    x.iter().filter(|c| !Field::is_zero(*c)).count()
}

pub fn l0_function(grid: Vec<Vec<f64>>) -> SampledFunction {
    SampledFunction::new("l0", grid, |x| l0(x) as f64)
}

/// Points with values, e.g. a conjugate tabulated on a dual grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridValues {
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

/// `(ρ(x), f(x))` over the grid; `Err(())` signals a `−∞` value.
fn coupling_terms(n: &SourceNorm, grid: &[Vec<f64>], values: &[f64]) -> std::result::Result<Vec<(Vec<f64>, f64)>, ()> {
    let mut terms = Vec::with_capacity(grid.len());
    for (x, &v) in grid.iter().zip(values) {
        if v == f64::NEG_INFINITY {
            return Err(());
        }
        if v == f64::INFINITY || v.is_nan() {
            continue;
        }
        let rho = n.project_f64(x).unwrap_or_else(|| vec![0.0; x.len()]);
        terms.push((rho, v));
    }
    Ok(terms)
}

fn sup_of_terms(terms: &std::result::Result<Vec<(Vec<f64>, f64)>, ()>, y: &[f64]) -> f64 {
    match terms {
        Err(()) => f64::INFINITY,
        Ok(t) => t.iter().map(|(rho, v)| dot(rho, y) - v).fold(f64::NEG_INFINITY, f64::max),
    }
}

fn conjugate_on(grid: &[Vec<f64>], values: &[f64], duals: &[Vec<f64>], n: &SourceNorm) -> GridValues {
    let terms = coupling_terms(n, grid, values);
    let out = map_indices(duals.len(), |j| sup_of_terms(&terms, &duals[j]));
    GridValues { points: duals.to_vec(), values: out }
}

/// `f^¢(y) = sup_x <ρ(x), y> − f(x)` over the grid of `f`.
pub fn capra_conjugate(f: &SampledFunction, duals: &[Vec<f64>], n: &SourceNorm) -> GridValues {
    conjugate_on(f.grid(), &f.values(), duals, n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Biconjugate {
    /// `f^¢` on the dual grid.
    pub conjugate: GridValues,
    /// `f^¢¢'` on the primal points.
    pub values: GridValues,
    /// Values of `f` at the primal points.
    pub original: Vec<f64>,
    /// `f^¢¢' ≤ f + slack` holds at every primal point.
    pub slack: f64,
}

impl Biconjugate {
    /// Largest `|f − f^¢¢'|` over primal points where `f` is finite.
    pub fn max_gap(&self) -> f64 {
        self.original
            .iter()
            .zip(&self.values.values)
            .filter(|(f, _)| f.is_finite())
            .map(|(f, b)| (f - b).abs())
            .fold(0.0, f64::max)
    }

    /// Largest violation of `f^¢¢' ≤ f` (nonpositive when the inequality holds).
    pub fn max_violation(&self) -> f64 {
        self.original
            .iter()
            .zip(&self.values.values)
            .map(|(f, b)| if *f == f64::INFINITY { f64::NEG_INFINITY } else { b - f })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `f^¢¢'(x) = sup_y <ρ(x), y> − f^¢(y)` at the primal points. The conjugate
/// is taken over the grid of `f` together with the primal points, which makes
/// the inequality `f^¢¢' ≤ f` hold there up to rounding.
pub fn capra_biconjugate(f: &SampledFunction, primal: &[Vec<f64>], duals: &[Vec<f64>], n: &SourceNorm) -> Biconjugate {
    let mut grid: Vec<Vec<f64>> = f.grid().to_vec();
    grid.extend(primal.iter().cloned());
    let values: Vec<f64> = grid.iter().map(|x| f.eval(x)).collect();
    let conjugate = conjugate_on(&grid, &values, duals, n);
    let bi = biconjugate_values(&conjugate, primal, n);
    let original = primal.iter().map(|x| f.eval(x)).collect();
    Biconjugate { conjugate, values: bi, original, slack: BICONJUGATE_SLACK }
}

fn biconjugate_values(conjugate: &GridValues, primal: &[Vec<f64>], n: &SourceNorm) -> GridValues {
    let mut terms: Vec<(&Vec<f64>, f64)> = Vec::with_capacity(conjugate.points.len());
    let mut plus_inf = false;
    for (y, &v) in conjugate.points.iter().zip(&conjugate.values) {
        if v == f64::NEG_INFINITY {
            plus_inf = true;
            break;
        }
        if v.is_finite() {
            terms.push((y, v));
        }
    }
    let out = map_indices(primal.len(), |i| {
        if plus_inf {
            return f64::INFINITY;
        }
        let rho = n.project_f64(&primal[i]).unwrap_or_else(|| vec![0.0; primal[i].len()]);
        terms.iter().map(|(y, v)| dot(&rho, y) - v).fold(f64::NEG_INFINITY, f64::max)
    });
    GridValues { points: primal.to_vec(), values: out }
}

/// The box `[−r, r]^d` with `res` points per axis, in row-major order.
/// Grids whose resolutions satisfy `(res' − 1) = k (res − 1)` are nested exactly.
pub fn box_grid(d: usize, r: f64, res: usize) -> Vec<Vec<f64>> {
    let axis: Vec<f64> = if res <= 1 {
        vec![0.0]
    } else {
        (0..res).map(|i| r * ((2 * i) as f64 / (res - 1) as f64 - 1.0)).collect()
    };
    let mut out = vec![Vec::with_capacity(d)];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

/// The default dual grid for dimension `d`.
pub fn default_dual_grid(d: usize) -> Vec<Vec<f64>> {
    box_grid(d, DEFAULT_DUAL_RADIUS, DEFAULT_DUAL_RESOLUTION)
}

/// `ℓ0^{≤t}` in `R^d` as a union of coordinate subspaces.
pub fn sublevel_cone(t: i64, d: usize) -> Result<ConeSpec<Rational>> {
    if t < 0 {
        return Err(Error::InvalidInput("the sublevel set is empty for t < 0".into()));
    }
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let axis = |i: usize, s: i64| {
        let mut e = vec![Rational::from_i64(0); d];
        e[i] = Rational::from_i64(s);
        e
    };
    let block = |subset: &[usize]| -> Result<ConeSpec<Rational>> {
        let g = subset.iter().flat_map(|&i| [axis(i, 1), axis(i, -1)]).collect();
        ConeSpec::convex_cone(PointSet::with_dim(d, g)?, true)
    };
    let t = t as usize;
    if t == 0 {
        return block(&[]);
    }
    if t >= d {
        return block(&(0..d).collect::<Vec<_>>());
    }
    let mut members = Vec::new();
    for size in 1..=t {
        for subset in subsets(d, size) {
            members.push(block(&subset)?);
        }
    }
    ConeSpec::union(members)
}

fn subsets(d: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(i + 1, d, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, size, &mut Vec::new(), &mut out);
    out
}

/// Sampled points of `S^(0)`; the origin is always a member.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    pub sphere: Vec<Vec<f64>>,
    pub resolution: usize,
}

impl SphereGrid {
    pub fn new(n: &SourceNorm, d: usize, resolution: usize, seed: u64) -> Result<Self> {
        Ok(SphereGrid { sphere: sphere_samples(n, d, resolution, seed)?, resolution })
    }

    pub fn dim(&self) -> usize {
        self.sphere.first().map_or(0, Vec::len)
    }

    /// Every point including the origin, which comes first.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut all = vec![vec![0.0; self.dim()]];
        all.extend(self.sphere.iter().cloned());
        all
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub value: f64,
    /// Attaining direction on the sphere; `None` when the origin attains it.
    pub direction: Option<Vec<f64>>,
    /// Sphere candidates examined.
    pub candidates: usize,
    /// No sphere point of `K` was found; only the origin was used.
    pub origin_only: bool,
}

/// Extra sphere candidates read off the representation of `K = cone(X)`.
fn representation_candidates<F: Field>(k: &ConeSpec<F>) -> Vec<Vec<f64>> {
    let kf = k.to_float();
    let mut out: Vec<Vec<f64>> = kf.generators().unwrap_or_default();
    if let ConeSpec::AffineSlice(s) = &kf {
        out.extend(s.support_points());
    }
    out
}

const HOMOGENEITY_FACTORS: [f64; 3] = [2.0, 0.5, 3.75];
const HOMOGENEITY_TOL: f64 = 1e-9;

/// Minimizes a zero-homogeneous `f` over `K` by reading it on `K ∩ S^(0)`.
pub fn minimize_over_cone<F: Field>(f: &SampledFunction, k: &ConeSpec<F>, n: &SourceNorm, grid: &SphereGrid) -> Result<Minimum> {
    if grid.dim() != k.dim() {
        return Err(Error::DimensionMismatch { expected: k.dim(), found: grid.dim() });
    }
    for x in grid.sphere.iter().step_by((grid.sphere.len() / 64).max(1)) {
        let fx = f.eval(x);
        for lambda in HOMOGENEITY_FACTORS {
            let scaled: Vec<f64> = x.iter().map(|c| c * lambda).collect();
            let fl = f.eval(&scaled);
            let same = (fx == fl) || (fx - fl).abs() <= HOMOGENEITY_TOL;
            if !same {
                return Err(Error::InvalidInput(format!("{} is not zero-homogeneous", f.name())));
            }
        }
    }
    let kf = k.to_float();
    let mut cands: Vec<Vec<f64>> = grid.sphere.iter().filter(|s| kf.contains(s).unwrap_or(false)).cloned().collect();
    cands.extend(representation_candidates(k).iter().filter_map(|g| n.project_f64(g)));

    let mut best = Minimum { value: f64::INFINITY, direction: None, candidates: cands.len(), origin_only: cands.is_empty() };
    if kf.origin_status() {
        best.value = f.eval(&vec![0.0; k.dim()]);
    }
    for s in cands {
        let v = f.eval(&s);
        if v < best.value {
            best.value = v;
            best.direction = Some(s);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn indicator_of_origin() {
        let f = indicator("origin", vec![vec![0.0, 0.0], vec![1.0, 0.0]], |x| x.iter().all(|c| *c == 0.0));
        assert_eq!(f.values(), vec![0.0, f64::INFINITY]);
        let c = capra_conjugate(&f, &[vec![5.0, -7.0], vec![0.0, 1.0]], &SourceNorm::l2());
        assert_eq!(c.values, vec![0.0, 0.0]);
    }

    #[test]
    fn support_function_examples() {
        assert_eq!(support_function(&[vec![1.0, 0.0], vec![0.0, 1.0]], &[2.0, 3.0]), 3.0);
        assert_eq!(support_function(&[], &[1.0]), f64::NEG_INFINITY);
    }

    #[test]
    fn l0_counts() {
        assert_eq!(l0(&[0.0, 0.0]), 0);
        assert_eq!(l0(&[3.0, 0.0, -2.0]), 2);
        assert_eq!(l0(&[1e-15, 1.0]), 1);
        assert_eq!(l0_exact(&[rational(0, 1), rational(1, 1)]), 1);
    }

    #[test]
    fn extended_real_rules() {
        let minus = SampledFunction::new("m", vec![vec![1.0]], |_| f64::NEG_INFINITY);
        assert_eq!(capra_conjugate(&minus, &[vec![0.0]], &SourceNorm::l2()).values, vec![f64::INFINITY]);
        let top = SampledFunction::new("t", vec![vec![1.0]], |_| f64::INFINITY);
        assert_eq!(capra_conjugate(&top, &[vec![0.0]], &SourceNorm::l2()).values, vec![f64::NEG_INFINITY]);
    }

    #[test]
    fn biconjugate_of_origin_indicator_in_one_dimension() {
        let f = indicator("origin", box_grid(1, 2.0, 5), |x| x[0] == 0.0);
        let b = capra_biconjugate(&f, &[vec![0.0]], &box_grid(1, 3.0, 7), &SourceNorm::l2());
        assert_eq!(b.values.values, vec![0.0]);
    }

    #[test]
    fn nested_box_grids() {
        let coarse = box_grid(2, 3.0, 101);
        let fine = box_grid(2, 3.0, 401);
        assert_eq!(coarse.len(), 101 * 101);
        assert!(coarse.iter().step_by(997).all(|p| fine.contains(p)));
        assert_eq!(box_grid(1, 3.0, 3), vec![vec![-3.0], vec![0.0], vec![3.0]]);
    }

    #[test]
    fn sublevel_sets() {
        let zero = sublevel_cone(0, 2).unwrap();
        assert!(zero.contains(&[rational(0, 1), rational(0, 1)]).unwrap());
        assert!(!zero.contains(&[rational(1, 1), rational(0, 1)]).unwrap());
        let axes = sublevel_cone(1, 2).unwrap();
        assert!(axes.contains(&[rational(0, 1), rational(-3, 1)]).unwrap());
        assert!(!axes.contains(&[rational(1, 1), rational(1, 1)]).unwrap());
        let all = sublevel_cone(2, 2).unwrap();
        assert!(all.contains(&[rational(1, 1), rational(1, 1)]).unwrap());
        assert!(sublevel_cone(-1, 2).is_err());
        let three = sublevel_cone(2, 3).unwrap();
        assert!(!three.contains(&[rational(1, 1), rational(1, 1), rational(1, 1)]).unwrap());
    }

    #[test]
    fn minimize_examples() {
        let n = SourceNorm::l2();
        let grid = SphereGrid::new(&n, 2, 720, 1).unwrap();
        let f = l0_function(Vec::new());
        let ray = ConeSpec::ray_fan(PointSet::new(vec![vec![rational(1, 1), rational(0, 1)]]).unwrap(), false).unwrap();
        assert_eq!(minimize_over_cone(&f, &ray, &n, &grid).unwrap().value, 1.0);
        let three = SampledFunction::new("three", Vec::new(), |_| 3.0);
        assert_eq!(minimize_over_cone(&three, &ray, &n, &grid).unwrap().value, 3.0);
        let not_homogeneous = SampledFunction::new("norm", Vec::new(), |x| x[0].abs());
        assert!(minimize_over_cone(&not_homogeneous, &ray, &n, &grid).is_err());
    }
}
