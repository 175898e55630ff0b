//! Dense vectors, extended reals and ambient norms.

use std::fmt;
use std::ops::Deref;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{check_finite, Error, Result};

/// A dense real vector with finite entries.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_finite(&coords)?;
        Ok(Self(coords))
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(coords.to_vec())
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// Standard basis vector `e_i` of length `n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Crate-internal constructor for values already known to be finite.
    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|v| v.is_finite()));
        Self(coords)
    }
}

impl Deref for Vector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for Vector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        Vector::new(v).map_err(de::Error::custom)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `a + s * b`
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// A value in `[-inf, +inf]`. Infinite values are sentinels and never stored
/// inside a [`Vector`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtendedReal {
    NegInfinity,
    Finite(f64),
    PosInfinity,
}

impl ExtendedReal {
    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            Self::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Lossy conversion to `f64` using IEEE infinities.
    pub fn to_f64(&self) -> f64 {
        match *self {
            Self::NegInfinity => f64::NEG_INFINITY,
            Self::Finite(v) => v,
            Self::PosInfinity => f64::INFINITY,
        }
    }

    pub fn from_f64(v: f64) -> Self {
        if v == f64::INFINITY {
            Self::PosInfinity
        } else if v == f64::NEG_INFINITY {
            Self::NegInfinity
        } else {
            Self::Finite(v)
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NegInfinity => f.write_str("-inf"),
            Self::Finite(v) => write!(f, "{v}"),
            Self::PosInfinity => f.write_str("+inf"),
        }
    }
}

// Finite values serialize as JSON numbers, infinities as the strings "+inf"/"-inf".
impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Self::NegInfinity => s.serialize_str("-inf"),
            Self::Finite(v) => s.serialize_f64(v),
            Self::PosInfinity => s.serialize_str("+inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = ExtendedReal;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a finite number or one of \"+inf\", \"-inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                Ok(ExtendedReal::Finite(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                Ok(ExtendedReal::Finite(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(ExtendedReal::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                match v {
                    "+inf" | "inf" => Ok(ExtendedReal::PosInfinity),
                    "-inf" => Ok(ExtendedReal::NegInfinity),
                    other => Err(E::custom(format!("unexpected string {other:?}"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Exponent of an ℓp norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormKind {
    #[serde(rename = "1")]
    L1,
    #[serde(rename = "2")]
    L2,
    #[serde(rename = "inf")]
    LInf,
}

/// The ambient norm of a problem: an ℓp norm with optional positive
/// coordinate weights, `‖x‖ = (Σ w_i |x_i|^p)^(1/p)` (or `max w_i |x_i|`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmbientNorm {
    pub kind: NormKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl Default for AmbientNorm {
    fn default() -> Self {
        Self::euclidean()
    }
}

impl AmbientNorm {
    pub fn euclidean() -> Self {
        Self {
            kind: NormKind::L2,
            weights: None,
        }
    }

    pub fn sup() -> Self {
        Self {
            kind: NormKind::LInf,
            weights: None,
        }
    }

    pub fn new(kind: NormKind, weights: Option<Vec<f64>>) -> Result<Self> {
        if let Some(w) = &weights {
            check_finite(w)?;
            if w.iter().any(|&v| v <= 0.0) {
                return Err(Error::Precondition("norm weights must be positive".into()));
            }
        }
        Ok(Self { kind, weights })
    }

    fn weight(&self, i: usize) -> f64 {
        self.weights
            .as_ref()
            .and_then(|w| w.get(i).copied())
            .unwrap_or(1.0)
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        match self.kind {
            NormKind::L1 => x
                .iter()
                .enumerate()
                .map(|(i, v)| self.weight(i) * v.abs())
                .sum(),
            NormKind::L2 => x
                .iter()
                .enumerate()
                .map(|(i, v)| self.weight(i) * v * v)
                .sum::<f64>()
                .sqrt(),
            NormKind::LInf => x
                .iter()
                .enumerate()
                .fold(0.0, |m, (i, v)| m.max(self.weight(i) * v.abs())),
        }
    }

    pub fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        self.norm(&sub(x, y))
    }
}
