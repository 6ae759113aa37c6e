//! Exact points of the projective line and Möbius transformations.
//!
//! A point is a reduced integer pair `[a : b]` with `b > 0`, or `[1 : 0]`
//! for infinity. All formulas are homogeneous, so infinity needs no special
//! handling.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ProjError {
    #[error("[0:0] is not a point of the projective line")]
    ZeroPoint,
    #[error("points must be pairwise distinct: {0}")]
    Degenerate(String),
    #[error("matrix is singular")]
    Singular,
    #[error("cannot parse point {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// A point `[a : b]` of the projective line in reduced form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint<T> {
    a: T,
    b: T,
}

impl<T: Scalar> ProjPoint<T> {
    pub fn new(a: T, b: T) -> Result<Self, ProjError> {
        if a.is_zero() && b.is_zero() {
            return Err(ProjError::ZeroPoint);
        }
        let g = a.gcd(&b);
        let (mut a, mut b) = (a / g.clone(), b / g);
        if b.is_negative() {
            a = -a;
            b = -b;
        }
        if b.is_zero() {
            a = T::one();
        }
        Ok(ProjPoint { a, b })
    }

    pub fn zero() -> Self {
        ProjPoint { a: T::zero(), b: T::one() }
    }

    pub fn one() -> Self {
        ProjPoint { a: T::one(), b: T::one() }
    }

    pub fn infinity() -> Self {
        ProjPoint { a: T::one(), b: T::zero() }
    }

    pub fn from_int(v: i64) -> Self {
        ProjPoint { a: T::from(v), b: T::one() }
    }

    pub fn from_ratio(r: &Ratio<T>) -> Self {
        Self::new(r.numer().clone(), r.denom().clone()).expect("denominator is nonzero")
    }

    pub fn a(&self) -> &T {
        &self.a
    }

    pub fn b(&self) -> &T {
        &self.b
    }

    pub fn is_infinity(&self) -> bool {
        self.b.is_zero()
    }

    /// The affine value, `None` at infinity.
    pub fn to_ratio(&self) -> Option<Ratio<T>> {
        (!self.b.is_zero()).then(|| Ratio::new(self.a.clone(), self.b.clone()))
    }

    /// Whether the point is one of `0`, `1`, `∞`.
    pub fn is_special(&self) -> bool {
        self.a.is_zero() || self.b.is_zero() || self.a == self.b
    }

    /// Homogeneous difference `a_z b_w - a_w b_z`, a multiple of `z - w`.
    pub fn wedge(&self, w: &Self) -> T {
        self.a.clone() * w.b.clone() - w.a.clone() * self.b.clone()
    }
}

impl<T: Scalar> fmt::Display for ProjPoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            f.write_str("inf")
        } else if self.b.is_one() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}/{}", self.a, self.b)
        }
    }
}

impl<T: Scalar> FromStr for ProjPoint<T> {
    type Err = ProjError;

    /// Accepts `inf`, `p`, `p/q` and `[a:b]`.
    fn from_str(s: &str) -> Result<Self, ProjError> {
        let err = |reason: &str| ProjError::Parse {
            input: s.to_owned(),
            reason: reason.to_owned(),
        };
        let int = |t: &str| -> Result<T, ProjError> {
            t.trim().parse::<T>().map_err(|_| err(&format!("{:?} is not an integer", t.trim())))
        };
        let t = s.trim();
        if t == "inf" || t == "∞" {
            return Ok(Self::infinity());
        }
        if let Some(inner) = t.strip_prefix('[') {
            let inner = inner.strip_suffix(']').ok_or_else(|| err("missing ']'"))?;
            let (a, b) = inner.split_once(':').ok_or_else(|| err("expected [a:b]"))?;
            return Self::new(int(a)?, int(b)?);
        }
        if let Some((p, q)) = t.split_once('/') {
            let q = int(q)?;
            if q.is_zero() {
                return Err(err("zero denominator"));
            }
            return Self::new(int(p)?, q);
        }
        Ok(ProjPoint { a: int(t)?, b: T::one() })
    }
}

impl<T: Scalar> Serialize for ProjPoint<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for ProjPoint<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a comma-separated list of points, e.g. `"0,1,inf,2,3"`.
pub fn parse_point_list<T: Scalar>(s: &str) -> Result<Vec<ProjPoint<T>>, ProjError> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect()
}

pub fn format_point_list<T: Scalar>(points: &[ProjPoint<T>]) -> String {
    points.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn ensure_distinct<T: Scalar>(points: &[&ProjPoint<T>]) -> Result<(), ProjError> {
    for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate().skip(i + 1) {
            if p == q {
                return Err(ProjError::Degenerate(format!(
                    "entries {i} and {j} are both {p}"
                )));
            }
        }
    }
    Ok(())
}

/// Cross-ratio `(z4 - z1)(z2 - z3) / ((z4 - z3)(z2 - z1))`.
pub fn cross_ratio<T: Scalar>(
    z1: &ProjPoint<T>,
    z2: &ProjPoint<T>,
    z3: &ProjPoint<T>,
    z4: &ProjPoint<T>,
) -> Result<ProjPoint<T>, ProjError> {
    ensure_distinct(&[z1, z2, z3, z4])?;
    let num = z4.wedge(z1) * z2.wedge(z3);
    let den = z4.wedge(z3) * z2.wedge(z1);
    ProjPoint::new(num, den)
}

/// A fractional-linear map `z ↦ (m00 z + m01) / (m10 z + m11)`, stored up
/// to scalar: entries have no common factor and the first nonzero entry is
/// positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mobius<T> {
    m: [[T; 2]; 2],
}

impl<T: Scalar> Mobius<T> {
    pub fn new(m00: T, m01: T, m10: T, m11: T) -> Result<Self, ProjError> {
        let det = m00.clone() * m11.clone() - m01.clone() * m10.clone();
        if det.is_zero() {
            return Err(ProjError::Singular);
        }
        let g = m00.gcd(&m01).gcd(&m10).gcd(&m11);
        let mut entries = [m00, m01, m10, m11].map(|e| e / g.clone());
        if entries.iter().find(|e| !e.is_zero()).is_some_and(|e| e.is_negative()) {
            entries = entries.map(|e| -e);
        }
        let [m00, m01, m10, m11] = entries;
        Ok(Mobius { m: [[m00, m01], [m10, m11]] })
    }

    pub fn identity() -> Self {
        Mobius {
            m: [[T::one(), T::zero()], [T::zero(), T::one()]],
        }
    }

    pub fn matrix(&self) -> &[[T; 2]; 2] {
        &self.m
    }

    pub fn apply(&self, z: &ProjPoint<T>) -> ProjPoint<T> {
        let [[p, q], [r, s]] = &self.m;
        let a = p.clone() * z.a.clone() + q.clone() * z.b.clone();
        let b = r.clone() * z.a.clone() + s.clone() * z.b.clone();
        ProjPoint::new(a, b).expect("nonsingular map sends points to points")
    }

    pub fn inverse(&self) -> Self {
        let [[p, q], [r, s]] = &self.m;
        Mobius::new(s.clone(), -q.clone(), -r.clone(), p.clone()).expect("adjugate is nonsingular")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let a = &self.m;
        let b = &other.m;
        let e = |i: usize, j: usize| a[i][0].clone() * b[0][j].clone() + a[i][1].clone() * b[1][j].clone();
        Mobius::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1)).expect("product of nonsingular maps")
    }

    /// The map sending `p, q, r` to `0, 1, ∞`. Its value at `w` is
    /// `cross_ratio(p, q, r, w)`.
    pub fn from_triple(p: &ProjPoint<T>, q: &ProjPoint<T>, r: &ProjPoint<T>) -> Result<Self, ProjError> {
        ensure_distinct(&[p, q, r])?;
        let qr = q.wedge(r);
        let qp = q.wedge(p);
        Mobius::new(
            qr.clone() * p.b.clone(),
            -(qr * p.a.clone()),
            qp.clone() * r.b.clone(),
            -(qp * r.a.clone()),
        )
    }
}
