//! The Capra-convexity decision cascade.
//!
//! Rules are tried in a fixed order and the first one that applies decides:
//! closed convex cones, pointed cones without the origin, unbounded affine
//! slices, the three-condition test under rotund norms, the exact planar test
//! under polyhedral norms, and failed necessary conditions. Anything left is
//! reported as undecided, with sampling evidence.

pub mod oracle;
pub mod spherical;
pub mod theorem;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::cone::ConeSpec;
use crate::error::{Error, Result};
use crate::hulls::{convex_hull_2d, origin_in_convex_hull, origin_in_hull_of, HullCertificate, PointSet};
use crate::norm::SourceNorm;
use crate::scalar::Field;
use crate::vector::{is_zero_vec, Vector};

pub use oracle::{sampling_oracle, OracleConfig, OracleReport};
pub use spherical::{is_spherically_convex, spherical_to_capra, SphericalCheck, SphericalPatch};
pub use theorem::{sphere_image_2d, theorem_test_2d, TheoremTest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CapraConvex,
    NotCapraConvex,
    UndecidedExact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "closed-convex-cone")]
    ClosedConvexCone,
    #[serde(rename = "pointed-minus-origin")]
    PointedMinusOrigin,
    #[serde(rename = "affine-kernel")]
    AffineKernel,
    #[serde(rename = "rotund-corollary")]
    RotundCorollary,
    #[serde(rename = "exact-2d-theorem")]
    Exact2dTheorem,
    #[serde(rename = "necessary-conditions")]
    NecessaryConditions,
    #[serde(rename = "coneX-compact")]
    ConeXCompact,
    #[serde(rename = "oracle-only")]
    OracleOnly,
}

/// The three necessary conditions: `K` is a cone, `K ∪ {0}` is closed,
/// and `0 ∈ K ⟺ 0 ∈ cch(ρ(K))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conditions {
    pub cone: bool,
    pub union_origin_closed: bool,
    pub origin_agreement: bool,
}

impl Conditions {
    pub fn of<F: Field>(k: &ConeSpec<F>) -> Self {
        Conditions { cone: true, union_origin_closed: k.union_origin_closed(), origin_agreement: k.origin_agreement() }
    }

    pub fn all(&self) -> bool {
        self.cone && self.union_origin_closed && self.origin_agreement
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate<F> {
    None,
    /// Evidence about `0 ∈ conv(points)`.
    Hull { points: Vec<Vec<F>>, hull: HullCertificate<F> },
    /// A point of `cch(ρ(K)) ∩ S^(0)` outside `ρ(K)`.
    Excess { point: Vec<F> },
    /// A nonzero recession direction in `ker A`; it is a limit of `ρ(K)` outside `K`.
    Kernel { direction: Vec<F> },
}

impl<F: Field> Serialize for Certificate<F> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let vec = |v: &[F]| Vector::from_coords(v);
        let mut m = serializer.serialize_map(None)?;
        match self {
            Certificate::None => m.serialize_entry("kind", "none")?,
            Certificate::Hull { points, hull } => {
                let value = serde_json::to_value(hull).map_err(serde::ser::Error::custom)?;
                if let serde_json::Value::Object(fields) = value {
                    for (key, v) in fields {
                        m.serialize_entry(&key, &v)?;
                    }
                }
                let pts: Vec<Vector> = points.iter().map(|p| vec(p)).collect();
                m.serialize_entry("points", &pts)?;
            }
            Certificate::Excess { point } => {
                m.serialize_entry("kind", "excess")?;
                m.serialize_entry("point", &vec(point))?;
            }
            Certificate::Kernel { direction } => {
                m.serialize_entry("kind", "kernel")?;
                m.serialize_entry("direction", &vec(direction))?;
            }
        }
        m.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct DecisionReport<F: Field> {
    pub verdict: Verdict,
    pub rule: Rule,
    pub conditions: Conditions,
    pub certificate: Certificate<F>,
    pub norm: SourceNorm,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
}

impl<F: Field> DecisionReport<F> {
    fn new(verdict: Verdict, rule: Rule, conditions: Conditions, certificate: Certificate<F>, n: &SourceNorm) -> Self {
        DecisionReport { verdict, rule, conditions, certificate, norm: *n, seed: None, oracle: None }
    }

    /// Attaches sampling evidence and records agreement with a definite verdict.
    pub fn with_oracle(mut self, mut evidence: OracleReport) -> Self {
        if self.verdict != Verdict::UndecidedExact {
            evidence.agrees_with_exact = Some(evidence.verdict == self.verdict);
        }
        self.seed = Some(evidence.seed);
        self.oracle = Some(evidence);
        self
    }

    /// Rechecks the certificate against `k` by direct arithmetic.
    pub fn verify(&self, k: &ConeSpec<F>) -> Result<bool> {
        if self.verdict == Verdict::CapraConvex && !self.conditions.all() {
            return Ok(false);
        }
        Ok(match &self.certificate {
            Certificate::None => self.verdict != Verdict::NotCapraConvex,
            Certificate::Hull { points, hull } => {
                let gens = k.generators().unwrap_or_default();
                let same = points.len() == gens.len() && points.iter().zip(&gens).all(|(p, g)| p == g);
                let consistent = match self.verdict {
                    // A combination shows 0 ∈ cch(ρ(K)); it refutes K only when 0 ∉ K.
                    Verdict::NotCapraConvex => hull.is_combination() && !k.origin_status(),
                    _ => true,
                };
                same && consistent && hull.verify(points)
            }
            Certificate::Excess { point } => self.verify_excess(k, point)?,
            Certificate::Kernel { direction } => match k {
                ConeSpec::AffineSlice(s) => s.verify_recession(direction) && !k.contains(direction)?,
                _ => false,
            },
        })
    }

    fn verify_excess(&self, k: &ConeSpec<F>, point: &[F]) -> Result<bool> {
        let on_sphere0 = is_zero_vec(point) || self.norm.on_sphere(point)?;
        if !on_sphere0 || k.contains(point)? {
            return Ok(false);
        }
        // Recompute conv(ρ(K)) independently of the sphere bookkeeping.
        let image = sphere_image_2d(k, &self.norm)?;
        let mut pts: Vec<Vec<F>> = image.points().to_vec();
        for s in image.segments() {
            pts.push(s.start.clone());
            pts.push(s.end.clone());
        }
        if image.origin() {
            pts.push(vec![F::zero(); point.len()]);
        }
        Ok(convex_hull_2d(&pts)?.contains(point))
    }
}

fn origin_certificate<F: Field>(k: &ConeSpec<F>) -> Certificate<F> {
    match k.generators() {
        Some(points) if !points.is_empty() => {
            let (_, hull) = origin_in_hull_of(&points, k.dim());
            Certificate::Hull { points, hull }
        }
        _ => Certificate::None,
    }
}

/// Decides Capra-convexity of `K` under the source norm `n`.
pub fn decide_capra_convex<F: Field>(k: &ConeSpec<F>, n: &SourceNorm) -> Result<DecisionReport<F>> {
    decide_capra_convex_with(k, n, &OracleConfig::default())
}

/// As [`decide_capra_convex`], with the oracle settings used for undecided cases.
pub fn decide_capra_convex_with<F: Field>(
    k: &ConeSpec<F>,
    n: &SourceNorm,
    cfg: &OracleConfig,
) -> Result<DecisionReport<F>> {
    let conditions = Conditions::of(k);
    let convex = matches!(k.is_convex(), Ok(true));
    let closed = conditions.union_origin_closed;
    use Verdict::*;

    if convex && closed {
        if k.origin_status() {
            return Ok(DecisionReport::new(CapraConvex, Rule::ClosedConvexCone, conditions, Certificate::None, n));
        }
        if matches!(k.is_pointed(), Ok(true)) {
            let cert = origin_certificate(k);
            return Ok(DecisionReport::new(CapraConvex, Rule::PointedMinusOrigin, conditions, cert, n));
        }
    }

    if let ConeSpec::AffineSlice(s) = k {
        if let Some(r) = s.recession_direction() {
            let cert = Certificate::Kernel { direction: r };
            return Ok(DecisionReport::new(NotCapraConvex, Rule::AffineKernel, conditions, cert, n));
        }
    }

    let negative_certificate = || {
        if conditions.origin_agreement {
            Certificate::None
        } else {
            origin_certificate(k)
        }
    };

    if n.is_rotund() {
        let verdict = if conditions.all() { CapraConvex } else { NotCapraConvex };
        let cert = if conditions.all() { origin_certificate(k) } else { negative_certificate() };
        return Ok(DecisionReport::new(verdict, Rule::RotundCorollary, conditions, cert, n));
    }

    if n.is_polyhedral() && k.dim() == 2 && !matches!(k, ConeSpec::AffineSlice(_)) {
        let test = theorem_test_2d(k, n)?;
        return Ok(match test.excess {
            None => DecisionReport::new(CapraConvex, Rule::Exact2dTheorem, conditions, Certificate::None, n),
            Some(point) => {
                DecisionReport::new(NotCapraConvex, Rule::Exact2dTheorem, conditions, Certificate::Excess { point }, n)
            }
        });
    }

    if !conditions.all() {
        return Ok(DecisionReport::new(NotCapraConvex, Rule::NecessaryConditions, conditions, negative_certificate(), n));
    }

    let report = DecisionReport::new(UndecidedExact, Rule::OracleOnly, conditions, Certificate::None, n);
    Ok(match sampling_oracle(k, n, cfg) {
        Ok(evidence) => report.with_oracle(evidence),
        Err(_) => report,
    })
}

/// A compact set whose conical hull is examined.
#[derive(Debug, Clone, PartialEq)]
pub enum HullInput<F> {
    /// A finite point set.
    Points(PointSet<F>),
    /// The convex polytope spanned by these vertices.
    Polytope(PointSet<F>),
}

impl<F: Field> HullInput<F> {
    fn set(&self) -> &PointSet<F> {
        match self {
            HullInput::Points(p) | HullInput::Polytope(p) => p,
        }
    }

    fn is_convex(&self) -> bool {
        match self {
            HullInput::Polytope(_) => true,
            HullInput::Points(p) => p.len() <= 1,
        }
    }

    /// `cone(X)`: the origin is in the cone exactly when it is in `X`.
    pub fn cone(&self) -> Result<ConeSpec<F>> {
        let set = self.set();
        let nonzero: Vec<Vec<F>> = set.points().iter().filter(|p| !is_zero_vec(p)).cloned().collect();
        let origin = set.contains_origin();
        let g = PointSet::with_dim(set.dim(), nonzero)?;
        match self {
            HullInput::Points(_) => ConeSpec::ray_fan(g, origin),
            HullInput::Polytope(_) if g.is_empty() => ConeSpec::convex_cone(g, true),
            HullInput::Polytope(_) => ConeSpec::polytope_cone(g, origin),
        }
    }
}

/// Conical hull of a compact set: Capra-convex when `0 ∉ conv(X)` and either
/// the norm is rotund or `X` is convex; otherwise the general cascade decides.
pub fn decide_conical_hull<F: Field>(x: &HullInput<F>, n: &SourceNorm) -> Result<DecisionReport<F>> {
    let set = x.set();
    if set.is_empty() {
        return Err(Error::InvalidInput("the conical hull of the empty set is empty".into()));
    }
    let k = x.cone()?;
    let (inside, hull) = origin_in_convex_hull(set);
    if !inside && (n.is_rotund() || x.is_convex()) {
        let cert = Certificate::Hull { points: set.points().to_vec(), hull };
        return Ok(DecisionReport::new(Verdict::CapraConvex, Rule::ConeXCompact, Conditions::of(&k), cert, n));
    }
    decide_capra_convex(&k, n)
}
