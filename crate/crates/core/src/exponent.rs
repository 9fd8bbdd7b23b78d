//! Exact rational exponents for quantities that are powers of `p`.
//!
//! An [`Exponent`] `e` stands for the real number `p^{-e}`, so larger
//! exponents mean smaller quantities.

use std::fmt;
use std::ops::Add;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Repr", try_from = "Repr")]
pub enum Exponent {
    /// The quantity is exactly `p^{-e}`.
    Exact(Rational64),
    /// The quantity is at most `p^{-e}`; working precision hides the rest.
    AtLeast(Rational64),
    /// The quantity is zero.
    PosInfinity,
    /// The quantity is infinite.
    NegInfinity,
}

impl Exponent {
    pub fn exact(n: i64) -> Self {
        Exponent::Exact(Rational64::from_integer(n))
    }

    /// True when the quantity is certainly `< p^{-r}`, i.e. the exponent is `> r`.
    pub fn surely_gt(self, r: Rational64) -> bool {
        match self {
            Exponent::Exact(e) | Exponent::AtLeast(e) => e > r,
            Exponent::PosInfinity => true,
            Exponent::NegInfinity => false,
        }
    }

    /// True when the exponent is certainly `>= r`.
    pub fn surely_ge(self, r: Rational64) -> bool {
        match self {
            Exponent::Exact(e) | Exponent::AtLeast(e) => e >= r,
            Exponent::PosInfinity => true,
            Exponent::NegInfinity => false,
        }
    }

    /// The exact value, if known and finite.
    pub fn value(self) -> Option<Rational64> {
        match self {
            Exponent::Exact(e) => Some(e),
            _ => None,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Exponent::Exact(_) | Exponent::PosInfinity | Exponent::NegInfinity)
    }

    /// Exponent of the reciprocal quantity.
    pub fn recip(self) -> Option<Exponent> {
        match self {
            Exponent::Exact(e) => Some(Exponent::Exact(-e)),
            // a lower bound on e is an upper bound on -e: not representable
            Exponent::AtLeast(_) => None,
            Exponent::PosInfinity => Some(Exponent::NegInfinity),
            Exponent::NegInfinity => Some(Exponent::PosInfinity),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", content = "value")]
enum Repr {
    Exact(String),
    AtLeast(String),
    PosInfinity,
    NegInfinity,
}

impl From<Exponent> for Repr {
    fn from(e: Exponent) -> Repr {
        match e {
            Exponent::Exact(r) => Repr::Exact(r.to_string()),
            Exponent::AtLeast(r) => Repr::AtLeast(r.to_string()),
            Exponent::PosInfinity => Repr::PosInfinity,
            Exponent::NegInfinity => Repr::NegInfinity,
        }
    }
}

impl TryFrom<Repr> for Exponent {
    type Error = num_rational::ParseRatioError;
    fn try_from(r: Repr) -> Result<Exponent, Self::Error> {
        Ok(match r {
            Repr::Exact(s) => Exponent::Exact(s.parse()?),
            Repr::AtLeast(s) => Exponent::AtLeast(s.parse()?),
            Repr::PosInfinity => Exponent::PosInfinity,
            Repr::NegInfinity => Exponent::NegInfinity,
        })
    }
}

/// Exponent of a product of quantities.
impl Add for Exponent {
    type Output = Exponent;
    fn add(self, rhs: Exponent) -> Exponent {
        use Exponent::*;
        match (self, rhs) {
            (NegInfinity, _) | (_, NegInfinity) => NegInfinity,
            (PosInfinity, _) | (_, PosInfinity) => PosInfinity,
            (Exact(a), Exact(b)) => Exact(a + b),
            (Exact(a) | AtLeast(a), Exact(b) | AtLeast(b)) => AtLeast(a + b),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Exact(e) => write!(f, "p^{}", -e),
            Exponent::AtLeast(e) => write!(f, "<= p^{}", -e),
            Exponent::PosInfinity => write!(f, "0"),
            Exponent::NegInfinity => write!(f, "inf"),
        }
    }
}

pub(crate) mod rational_str {
    use num_rational::Rational64;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}
