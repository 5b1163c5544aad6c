//! Exact rational scalars and vectors.
//!
//! Everything in the root-system layer is computed over `BigRational`.
//! Values cross into the float layer through [`to_f64`] and come back
//! exactly through [`from_f64`] (every finite double is a dyadic rational).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;
pub type QVec = Vec<Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qvec(xs: &[i64]) -> QVec {
    xs.iter().map(|&x| q(x)).collect()
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

pub fn vec_to_f64(v: &[Q]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

/// Exact conversion of a finite double.
pub fn from_f64(x: f64) -> Result<Q> {
    Q::from_float(x).ok_or_else(|| Error::Input(format!("non-finite number {x}")))
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"-0.125"`, exactly.
pub fn parse_rational(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::Input(format!("cannot parse rational {s:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Input(format!("zero denominator in {s:?}")));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches(['-', '+']);
        let whole = if ip_abs.is_empty() { BigInt::zero() } else { BigInt::from_str(ip_abs).map_err(|_| bad())? };
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let frac = BigInt::from_str(fp).map_err(|_| bad())?;
        let r = Q::new(whole * &scale + frac, scale);
        return Ok(if neg { -r } else { r });
    }
    BigInt::from_str(t).map(Q::from_integer).map_err(|_| bad())
}

pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Q, a: &[Q]) -> QVec {
    a.iter().map(|x| c * x).collect()
}

pub fn neg(a: &[Q]) -> QVec {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero_vec(a: &[Q]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn zeros(n: usize) -> QVec {
    vec![Q::zero(); n]
}

pub fn unit(n: usize, i: usize) -> QVec {
    let mut v = zeros(n);
    v[i] = Q::one();
    v
}

/// Rescales a nonzero vector to the primitive integer vector on its ray.
pub fn primitive(v: &[Q]) -> QVec {
    if is_zero_vec(v) {
        return v.to_vec();
    }
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().filter(|x| !x.is_zero()).fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| Q::from_integer(x / &g)).collect()
}

/// `Some(c)` with `a = c * b`, `None` if the vectors are not proportional.
/// `b` must be nonzero.
pub fn ratio_if_collinear(a: &[Q], b: &[Q]) -> Option<Q> {
    let k = b.iter().position(|x| !x.is_zero())?;
    let c = &a[k] / &b[k];
    a.iter().zip(b).all(|(x, y)| *x == &c * y).then_some(c)
}

/// An extended rational: finite or `+∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtQ {
    Finite(Q),
    PosInf,
}

impl ExtQ {
    pub fn finite(&self) -> Option<&Q> {
        match self {
            ExtQ::Finite(x) => Some(x),
            ExtQ::PosInf => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtQ::Finite(x) => to_f64(x),
            ExtQ::PosInf => f64::INFINITY,
        }
    }
}

impl fmt::Display for ExtQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtQ::Finite(x) => write!(f, "{x}"),
            ExtQ::PosInf => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtQ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Serde adapter: writes `"p/q"` strings, reads strings or JSON numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatStr(pub Q);

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = RatStr;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as \"p/q\" string or a number")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<RatStr, E> {
                parse_rational(v).map(RatStr).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<RatStr, E> {
                Ok(RatStr(q(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<RatStr, E> {
                Ok(RatStr(Q::from_integer(BigInt::from(v))))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<RatStr, E> {
                from_f64(v).map(RatStr).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

pub fn to_ratstr(v: &[Q]) -> Vec<RatStr> {
    v.iter().cloned().map(RatStr).collect()
}

pub fn from_ratstr(v: Vec<RatStr>) -> QVec {
    v.into_iter().map(|r| r.0).collect()
}

/// Serde adapter for floats that may be infinite: non-finite values are
/// written as the strings `"inf"`, `"-inf"` and `"nan"`.
pub mod ext_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Str(s) => match s.as_str() {
                "inf" | "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                _ => Err(serde::de::Error::custom(format!("not a number: {s}"))),
            },
        }
    }
}
