use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::scalar::{scalar_from_json, Field, Mode, Rational, Scalar};

/// A point of R^d whose coordinates all share one scalar mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Vector {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

impl Vector {
    pub fn from_ints(coords: &[i64]) -> Self {
        Vector::Exact(coords.iter().map(|&c| Rational::from_i64(c)).collect())
    }

    pub fn from_scalars(coords: &[Scalar]) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("vectors need at least one coordinate".into()));
        }
        match coords[0].mode() {
            Mode::Exact => coords.iter().map(Rational::from_scalar).collect::<Result<_>>().map(Vector::Exact),
            Mode::Float => coords.iter().map(f64::from_scalar).collect::<Result<_>>().map(Vector::Float),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Vector::Exact(c) => c.len(),
            Vector::Float(c) => c.len(),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Vector::Exact(_) => Mode::Exact,
            Vector::Float(_) => Mode::Float,
        }
    }

    pub fn scalars(&self) -> Vec<Scalar> {
        match self {
            Vector::Exact(c) => c.iter().map(Field::to_scalar).collect(),
            Vector::Float(c) => c.iter().map(Field::to_scalar).collect(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Vector::Exact(c) => c.iter().map(Field::to_f64).collect(),
            Vector::Float(c) => c.clone(),
        }
    }

    pub fn to_float(&self) -> Vector {
        Vector::Float(self.to_f64())
    }

    pub fn to_exact(&self) -> Result<Vector> {
        match self {
            Vector::Exact(_) => Ok(self.clone()),
            Vector::Float(_) => {
                let coords = self.scalars().iter().map(|s| s.to_exact()).collect::<Result<Vec<_>>>()?;
                Vector::from_scalars(&coords)
            }
        }
    }

    /// Coordinates in field `F`; fails when the mode differs.
    pub fn coords<F: Field>(&self) -> Result<Vec<F>> {
        self.scalars().iter().map(F::from_scalar).collect()
    }

    pub fn from_coords<F: Field>(coords: &[F]) -> Vector {
        let scalars: Vec<Scalar> = coords.iter().map(Field::to_scalar).collect();
        match F::MODE {
            Mode::Exact => Vector::Exact(scalars.iter().map(|s| s.as_exact().cloned().unwrap()).collect()),
            Mode::Float => Vector::Float(scalars.iter().map(Scalar::to_f64).collect()),
        }
    }

    pub fn dot(&self, other: &Vector) -> Result<Scalar> {
        check_dim(self.dim(), other.dim())?;
        match (self, other) {
            (Vector::Exact(a), Vector::Exact(b)) => Ok(Scalar::Exact(dot(a, b))),
            (Vector::Float(a), Vector::Float(b)) => Ok(Scalar::Float(dot(a, b))),
            _ => Err(Error::ModeMismatch),
        }
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.scalars().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let values = Vec::<serde_json::Value>::deserialize(deserializer)?;
        let scalars = values
            .iter()
            .map(scalar_from_json)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        vector_from_scalars_lenient(&scalars).map_err(serde::de::Error::custom)
    }
}

/// Integers are exact unless a float shares the vector, in which case the
/// whole vector is read in float mode. Rational strings never mix with floats.
pub(crate) fn vector_from_scalars_lenient(scalars: &[Scalar]) -> Result<Vector> {
    let has_float = scalars.iter().any(|s| s.mode() == Mode::Float);
    if !has_float {
        return Vector::from_scalars(scalars);
    }
    let coords = scalars
        .iter()
        .map(|s| match s {
            Scalar::Float(v) => Ok(*v),
            Scalar::Exact(q) if q.is_integer() => Ok(q.to_f64()),
            Scalar::Exact(_) => Err(Error::ModeMismatch),
        })
        .collect::<Result<Vec<_>>>()?;
    if coords.is_empty() {
        return Err(Error::InvalidInput("vectors need at least one coordinate".into()));
    }
    Ok(Vector::Float(coords))
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn sub<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn add<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn scale<F: Field>(a: &[F], s: &F) -> Vec<F> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

pub fn is_zero_vec<F: Field>(a: &[F]) -> bool {
    a.iter().all(Field::is_zero)
}

pub fn approx_eq_vec<F: Field>(a: &[F], b: &[F]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y))
}

/// 2D cross product `a.x * b.y - a.y * b.x`.
pub fn cross<F: Field>(a: &[F], b: &[F]) -> F {
    a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone()
}

/// Lexicographic order with tolerance on each coordinate.
pub fn lex_cmp<F: Field>(a: &[F], b: &[F]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp_tol(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

pub fn to_f64_vec<F: Field>(a: &[F]) -> Vec<f64> {
    a.iter().map(Field::to_f64).collect()
}

/// True when `a` is a positive multiple of `b` (both nonzero).
pub fn same_ray<F: Field>(a: &[F], b: &[F]) -> bool {
    if a.len() != b.len() || is_zero_vec(a) || is_zero_vec(b) {
        return false;
    }
    // a = t b with t > 0: pick a pivot coordinate of b.
    let pivot = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.abs().partial_cmp(&y.1.abs()).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(i, _)| i)
        .unwrap();
    let t = a[pivot].clone() / b[pivot].clone();
    if !t.is_positive() {
        return false;
    }
    a.iter().zip(b).all(|(x, y)| x.approx_eq(&(t.clone() * y.clone())))
}
