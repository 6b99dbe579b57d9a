//! Source norms, the radial projection onto the unit sphere, and the Capra
//! coupling `¢(x, y) = <ρ(x), y>`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::scalar::{Field, Mode, Scalar, NORM_TOL};
use crate::vector::{dot, is_zero_vec, Vector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    L1,
    L2,
    LInf,
    /// A real exponent in (1, ∞), float paths only.
    Lp(f64),
}

/// An ℓp source norm. Its unit ball is rotund exactly when 1 < p < ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceNorm {
    kind: NormKind,
}

impl SourceNorm {
    pub const fn l1() -> Self {
        SourceNorm { kind: NormKind::L1 }
    }

    pub const fn l2() -> Self {
        SourceNorm { kind: NormKind::L2 }
    }

    pub const fn linf() -> Self {
        SourceNorm { kind: NormKind::LInf }
    }

    pub fn lp(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            return Ok(Self::linf());
        }
        if !p.is_finite() || p < 1.0 {
            return Err(Error::InvalidInput(format!("norm exponent must lie in [1, inf], got {p}")));
        }
        Ok(if p == 1.0 {
            Self::l1()
        } else if p == 2.0 {
            Self::l2()
        } else {
            SourceNorm { kind: NormKind::Lp(p) }
        })
    }

    pub fn kind(&self) -> NormKind {
        self.kind
    }

    pub fn exponent(&self) -> f64 {
        match self.kind {
            NormKind::L1 => 1.0,
            NormKind::L2 => 2.0,
            NormKind::LInf => f64::INFINITY,
            NormKind::Lp(p) => p,
        }
    }

    pub fn is_rotund(&self) -> bool {
        matches!(self.kind, NormKind::L2 | NormKind::Lp(_))
    }

    pub fn is_polyhedral(&self) -> bool {
        matches!(self.kind, NormKind::L1 | NormKind::LInf)
    }

    /// `‖x‖`. Exact mode is only available for the polyhedral norms.
    pub fn norm<F: Field>(&self, x: &[F]) -> Result<F> {
        match (self.kind, F::MODE) {
            (NormKind::L1, _) => Ok(x.iter().fold(F::zero(), |acc, c| acc + c.abs())),
            (NormKind::LInf, _) => Ok(x.iter().fold(F::zero(), |acc, c| {
                let a = c.abs();
                if a > acc {
                    a
                } else {
                    acc
                }
            })),
            (NormKind::L2, Mode::Exact) => Err(Error::IrrationalNorm(2)),
            (NormKind::Lp(_), Mode::Exact) => Err(Error::Unsupported("exact lp norms with non-integer p".into())),
            (_, Mode::Float) => {
                let v: Vec<f64> = x.iter().map(Field::to_f64).collect();
                let n = self.norm_f64(&v);
                F::from_scalar(&Scalar::Float(n))
            }
        }
    }

    /// `‖x‖²` for the Euclidean norm, exact in either mode.
    pub fn norm_squared<F: Field>(&self, x: &[F]) -> Result<F> {
        match self.kind {
            NormKind::L2 => Ok(dot(x, x)),
            _ => {
                let n = self.norm(x)?;
                Ok(n.clone() * n)
            }
        }
    }

    pub fn norm_f64(&self, x: &[f64]) -> f64 {
        match self.kind {
            NormKind::L1 => x.iter().map(|c| c.abs()).sum(),
            NormKind::L2 => x.iter().map(|c| c * c).sum::<f64>().sqrt(),
            NormKind::LInf => x.iter().fold(0.0, |acc, c| acc.max(c.abs())),
            NormKind::Lp(p) => {
                let m = x.iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
                if m == 0.0 {
                    return 0.0;
                }
                m * x.iter().map(|c| (c.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
            }
        }
    }

    /// `ρ(x)`: `None` stands for the origin tag, otherwise `x / ‖x‖`.
    pub fn project<F: Field>(&self, x: &[F]) -> Result<Option<Vec<F>>> {
        if is_zero_vec(x) {
            return Ok(None);
        }
        let n = self.norm(x)?;
        Ok(Some(x.iter().map(|c| c.clone() / n.clone()).collect()))
    }

    pub fn project_f64(&self, x: &[f64]) -> Option<Vec<f64>> {
        let n = self.norm_f64(x);
        if n == 0.0 {
            None
        } else {
            Some(x.iter().map(|c| c / n).collect())
        }
    }

    /// Sphere membership: exact for rationals (squared test under ℓ2),
    /// within [`NORM_TOL`] for floats.
    pub fn on_sphere<F: Field>(&self, x: &[F]) -> Result<bool> {
        match F::MODE {
            Mode::Exact => Ok(self.norm_squared(x)? == F::one()),
            Mode::Float => {
                let v: Vec<f64> = x.iter().map(Field::to_f64).collect();
                Ok((self.norm_f64(&v) - 1.0).abs() <= NORM_TOL)
            }
        }
    }

    /// `‖x‖ ≤ 1`, exact for rationals.
    pub fn in_ball<F: Field>(&self, x: &[F]) -> Result<bool> {
        match F::MODE {
            Mode::Exact => Ok(self.norm_squared(x)? <= F::one()),
            Mode::Float => {
                let v: Vec<f64> = x.iter().map(Field::to_f64).collect();
                Ok(self.norm_f64(&v) <= 1.0 + NORM_TOL)
            }
        }
    }

    /// A subgradient `g` of the norm at `x ≠ 0`: `<g, x> = ‖x‖` and `<g, z> ≤ ‖z‖` for all `z`.
    pub fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        match self.kind {
            NormKind::L1 => x.iter().map(|c| if *c == 0.0 { 0.0 } else { c.signum() }).collect(),
            NormKind::LInf => {
                let (k, _) = x
                    .iter()
                    .enumerate()
                    .fold((0, -1.0), |best, (i, c)| if c.abs() > best.1 { (i, c.abs()) } else { best });
                let mut g = vec![0.0; x.len()];
                g[k] = x[k].signum();
                g
            }
            NormKind::L2 | NormKind::Lp(_) => {
                let p = self.exponent();
                let n = self.norm_f64(x);
                x.iter()
                    .map(|c| c.signum() * (c.abs() / n).powf(p - 1.0))
                    .collect()
            }
        }
    }

    /// Outward facet normals `n` of the 2D unit ball, with facets `<n, x> = 1`,
    /// in counterclockwise order starting from the +x direction.
    pub fn facet_normals_2d<F: Field>(&self) -> Result<Vec<[F; 2]>> {
        let i = |v: i64| F::from_i64(v);
        match self.kind {
            NormKind::LInf => Ok(vec![[i(1), i(0)], [i(0), i(1)], [i(-1), i(0)], [i(0), i(-1)]]),
            NormKind::L1 => Ok(vec![[i(1), i(1)], [i(-1), i(1)], [i(-1), i(-1)], [i(1), i(-1)]]),
            _ => Err(Error::Unsupported("facets exist only for polyhedral norms".into())),
        }
    }

    /// Corners of the 2D unit ball, counterclockwise.
    pub fn corners_2d<F: Field>(&self) -> Result<Vec<[F; 2]>> {
        let i = |v: i64| F::from_i64(v);
        match self.kind {
            NormKind::LInf => Ok(vec![[i(1), i(1)], [i(-1), i(1)], [i(-1), i(-1)], [i(1), i(-1)]]),
            NormKind::L1 => Ok(vec![[i(1), i(0)], [i(0), i(1)], [i(-1), i(0)], [i(0), i(-1)]]),
            _ => Err(Error::Unsupported("corners exist only for polyhedral norms".into())),
        }
    }

    /// A point of the 2D unit sphere in direction `theta`.
    pub fn sphere_point_2d(&self, theta: f64) -> [f64; 2] {
        let v = [theta.cos(), theta.sin()];
        let n = self.norm_f64(&v);
        [v[0] / n, v[1] / n]
    }
}

impl fmt::Display for SourceNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            NormKind::L1 => f.write_str("l1"),
            NormKind::L2 => f.write_str("l2"),
            NormKind::LInf => f.write_str("linf"),
            NormKind::Lp(p) => write!(f, "p={p}"),
        }
    }
}

/// Accepts `l1`, `l2`, `linf`, `inf`, `p=<x>`, or a bare exponent.
impl FromStr for SourceNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "l1" | "1" => Ok(Self::l1()),
            "l2" | "2" => Ok(Self::l2()),
            "linf" | "inf" | "infinity" | "p=inf" => Ok(Self::linf()),
            other => {
                let digits = other.strip_prefix("p=").unwrap_or(other);
                let p: f64 = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("unknown norm {s:?}")))?;
                Self::lp(p)
            }
        }
    }
}

impl Serialize for SourceNorm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(1))?;
        match self.kind {
            NormKind::L1 => map.serialize_entry("p", "1")?,
            NormKind::L2 => map.serialize_entry("p", "2")?,
            NormKind::LInf => map.serialize_entry("p", "inf")?,
            NormKind::Lp(p) => map.serialize_entry("p", &p)?,
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for SourceNorm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            p: serde_json::Value,
        }
        let raw = Raw::deserialize(deserializer)?;
        let parsed = match &raw.p {
            serde_json::Value::String(s) => s.parse(),
            serde_json::Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("bad exponent {n}")))
                .and_then(SourceNorm::lp),
            other => Err(Error::Parse(format!("bad norm exponent {other}"))),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// A member of `S^(0) = S ∪ {0}`.
#[derive(Debug, Clone, PartialEq)]
pub enum SpherePoint {
    Origin,
    Unit(Vector),
}

impl SpherePoint {
    pub fn is_origin(&self) -> bool {
        matches!(self, SpherePoint::Origin)
    }
}

pub fn norm(x: &Vector, n: &SourceNorm) -> Result<Scalar> {
    match x {
        Vector::Exact(c) => n.norm(c).map(|v| v.to_scalar()),
        Vector::Float(c) => Ok(Scalar::Float(n.norm_f64(c))),
    }
}

pub fn norm_squared(x: &Vector, n: &SourceNorm) -> Result<Scalar> {
    match x {
        Vector::Exact(c) => n.norm_squared(c).map(|v| v.to_scalar()),
        Vector::Float(c) => Ok(Scalar::Float(n.norm_f64(c).powi(2))),
    }
}

pub fn radial_projection(x: &Vector, n: &SourceNorm) -> Result<SpherePoint> {
    Ok(match x {
        Vector::Exact(c) => match n.project(c)? {
            None => SpherePoint::Origin,
            Some(u) => SpherePoint::Unit(Vector::Exact(u)),
        },
        Vector::Float(c) => match n.project_f64(c) {
            None => SpherePoint::Origin,
            Some(u) => SpherePoint::Unit(Vector::Float(u)),
        },
    })
}

/// `¢(x, y) = <ρ(x), y>`: zero when `x = 0`, else `<x, y> / ‖x‖`.
pub fn capra_coupling(x: &Vector, y: &Vector, n: &SourceNorm) -> Result<Scalar> {
    check_dim(x.dim(), y.dim())?;
    if x.mode() != y.mode() {
        return Err(Error::ModeMismatch);
    }
    match radial_projection(x, n)? {
        SpherePoint::Origin => Ok(match x.mode() {
            Mode::Exact => Scalar::int(0),
            Mode::Float => Scalar::Float(0.0),
        }),
        SpherePoint::Unit(u) => u.dot(y),
    }
}

/// Float coupling used by the conjugacy engine.
pub fn coupling_f64(n: &SourceNorm, x: &[f64], y: &[f64]) -> f64 {
    match n.project_f64(x) {
        None => 0.0,
        Some(u) => dot(&u, y),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&Vector::Float(vec![3.0, 4.0]), &SourceNorm::l2()).unwrap(), Scalar::Float(5.0));
        assert_eq!(norm(&Vector::from_ints(&[-2, 2]), &SourceNorm::linf()).unwrap(), Scalar::int(2));
        assert_eq!(norm(&Vector::from_ints(&[1, -2, 3]), &SourceNorm::l1()).unwrap(), Scalar::int(6));
    }

    #[test]
    fn exact_l2_norm_is_refused_but_squared_is_available() {
        let x = Vector::from_ints(&[3, 4]);
        assert_eq!(norm(&x, &SourceNorm::l2()), Err(Error::IrrationalNorm(2)));
        assert_eq!(norm_squared(&x, &SourceNorm::l2()).unwrap(), Scalar::int(25));
    }

    #[test]
    fn projection_examples() {
        let r = radial_projection(&Vector::Float(vec![2.0, 0.0]), &SourceNorm::l2()).unwrap();
        assert_eq!(r, SpherePoint::Unit(Vector::Float(vec![1.0, 0.0])));
        for n in [SourceNorm::l1(), SourceNorm::l2(), SourceNorm::linf()] {
            assert!(radial_projection(&Vector::from_ints(&[0, 0]), &n).unwrap().is_origin());
        }
        let r = radial_projection(&Vector::from_ints(&[-2, 2]), &SourceNorm::linf()).unwrap();
        assert_eq!(r, SpherePoint::Unit(Vector::from_ints(&[-1, 1])));
    }

    #[test]
    fn coupling_examples() {
        let c = capra_coupling(&Vector::Float(vec![3.0, 0.0]), &Vector::Float(vec![1.0, 2.0]), &SourceNorm::l2()).unwrap();
        assert_eq!(c, Scalar::Float(1.0));
        let c = capra_coupling(&Vector::from_ints(&[0, 0]), &Vector::from_ints(&[5, -7]), &SourceNorm::linf()).unwrap();
        assert_eq!(c, Scalar::int(0));
        // ρ((1,1)) = (1,1) under ℓ∞: direct evaluation gives <(1,1),(1,1)> / 1.
        let x = Vector::from_ints(&[1, 1]);
        let c = capra_coupling(&x, &x, &SourceNorm::linf()).unwrap();
        let direct = x.dot(&x).unwrap().checked_div(&norm(&x, &SourceNorm::linf()).unwrap()).unwrap();
        assert_eq!(c, direct);
        assert_eq!(c, Scalar::int(2));
    }

    #[test]
    fn coupling_errors() {
        let x = Vector::from_ints(&[1, 1]);
        assert!(matches!(
            capra_coupling(&x, &Vector::from_ints(&[1, 1, 1]), &SourceNorm::l1()),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(
            capra_coupling(&x, &Vector::Float(vec![1.0, 1.0]), &SourceNorm::l1()),
            Err(Error::ModeMismatch)
        );
    }

    #[test]
    fn exact_sphere_membership() {
        let n = SourceNorm::l2();
        assert!(n.on_sphere(&[rational(3, 5), rational(4, 5)]).unwrap());
        assert!(!n.on_sphere(&[rational(1, 2), rational(1, 2)]).unwrap());
    }

    #[test]
    fn rotundity_flag() {
        assert!(SourceNorm::l2().is_rotund());
        assert!(SourceNorm::lp(1.5).unwrap().is_rotund());
        assert!(!SourceNorm::l1().is_rotund());
        assert!(!SourceNorm::linf().is_rotund());
        assert!(SourceNorm::lp(0.5).is_err());
    }

    #[test]
    fn norm_descriptor_json() {
        let n: SourceNorm = serde_json::from_str(r#"{"p": "inf"}"#).unwrap();
        assert_eq!(n, SourceNorm::linf());
        let n: SourceNorm = serde_json::from_str(r#"{"p": 3}"#).unwrap();
        assert_eq!(n.exponent(), 3.0);
        assert_eq!(serde_json::to_string(&SourceNorm::l1()).unwrap(), r#"{"p":"1"}"#);
        assert_eq!("p=1.5".parse::<SourceNorm>().unwrap().exponent(), 1.5);
        assert!(serde_json::from_str::<SourceNorm>(r#"{"p": "2", "q": 1}"#).is_err());
    }

    #[test]
    fn subgradient_supports_the_ball() {
        for n in [SourceNorm::l1(), SourceNorm::l2(), SourceNorm::linf(), SourceNorm::lp(3.0).unwrap()] {
            let x = [0.3, -1.7];
            let g = n.subgradient(&x);
            assert!((dot(&g, &x) - n.norm_f64(&x)).abs() < 1e-12);
        }
    }
}
