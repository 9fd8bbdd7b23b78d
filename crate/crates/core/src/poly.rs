//! Univariate polynomials over `Z_p` in the flat precision model.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};
use crate::padic::{PAdicInt, Valuation};
use crate::prime::Prime;

/// A polynomial with exact integer coefficients, index 0 first.
///
/// This is the interchange form: it can be embedded into `Z_p[T]` at any
/// precision, which is what lets the solver restart with more digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::PreconditionViolated("polynomial needs at least one coefficient".into()));
        }
        Ok(IntPoly { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn to_padic(&self, prime: Prime, precision: u32) -> Result<PAdicPoly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| PAdicInt::from_integer(c, prime, precision))
            .collect::<Result<Vec<_>>>()?;
        PAdicPoly::new(prime, coeffs)
    }
}

/// Parse failure for a comma-separated coefficient list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsePolyError {
    /// Zero-based index of the offending coefficient.
    pub position: usize,
    pub token: String,
}

impl fmt::Display for ParsePolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "coefficient {} ({:?}) is not a decimal integer", self.position, self.token)
    }
}

impl std::error::Error for ParsePolyError {}

impl FromStr for IntPoly {
    type Err = ParsePolyError;

    /// Parses `"c0,c1,...,cd"`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let coeffs = s
            .split(',')
            .enumerate()
            .map(|(position, tok)| {
                tok.trim().parse::<BigInt>().map_err(|_| ParsePolyError {
                    position,
                    token: tok.to_string(),
                })
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(IntPoly { coeffs })
    }
}

/// A polynomial `sum_k f_k T^k` with coefficients in `Z_p` at finite precision.
///
/// The degree is the largest stored index, even when that coefficient
/// vanishes to precision.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdicPoly {
    prime: Prime,
    coeffs: Vec<PAdicInt>,
}

impl PAdicPoly {
    pub fn new(prime: Prime, coeffs: Vec<PAdicInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::PreconditionViolated("polynomial needs at least one coefficient".into()));
        }
        if let Some(c) = coeffs.iter().find(|c| c.prime() != prime) {
            return Err(Error::PrimeMismatch(prime.get(), c.prime().get()));
        }
        Ok(PAdicPoly { prime, coeffs })
    }

    pub fn from_i64s(coeffs: &[i64], prime: Prime, precision: u32) -> Result<Self> {
        IntPoly::from_i64s(coeffs)?.to_padic(prime, precision)
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn coeffs(&self) -> &[PAdicInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&PAdicInt> {
        self.coeffs.get(k)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Minimum of the coefficient precisions.
    pub fn effective_precision(&self) -> u32 {
        self.coeffs.iter().map(PAdicInt::precision).min().unwrap_or(0)
    }

    pub fn valuations(&self) -> Vec<Valuation> {
        self.coeffs.iter().map(PAdicInt::valuation).collect()
    }

    /// The canonical residues as integers (for exact re-embedding).
    pub fn to_int_poly(&self) -> IntPoly {
        IntPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| BigInt::from(c.value().clone()))
                .collect(),
        }
    }

    /// The `e` with `||f|| = p^{-e}`, i.e. the minimum coefficient valuation.
    pub fn gauss_norm_exponent(&self) -> Result<u32> {
        let vals = self.valuations();
        let m = vals
            .iter()
            .filter_map(|v| v.known())
            .min()
            .ok_or_else(|| Error::exhausted("polynomial vanishes to working precision"))?;
        if vals.iter().any(|v| matches!(v, Valuation::AtLeast(b) if *b <= m)) {
            return Err(Error::exhausted("Gauss norm undecidable at working precision"));
        }
        Ok(m)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &PAdicInt) -> Result<PAdicInt> {
        let mut acc = self.coeffs.last().expect("non-empty").clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(x)?.add(c)?;
        }
        Ok(acc)
    }

    /// `(f(x), f'(x))` by a paired Horner scheme.
    pub fn eval_with_derivative(&self, x: &PAdicInt) -> Result<(PAdicInt, PAdicInt)> {
        let mut value = self.coeffs.last().expect("non-empty").clone();
        let mut deriv = PAdicInt::zero(self.prime, value.precision())?;
        for c in self.coeffs.iter().rev().skip(1) {
            deriv = deriv.mul(x)?.add(&value)?;
            value = value.mul(x)?.add(c)?;
        }
        Ok((value, deriv))
    }

    /// `f(x + T)`: coefficient `k` is `f^(k)(x)/k!`.
    ///
    /// Repeated synthetic division, so only additions and multiplications
    /// occur and no precision is lost.
    pub fn taylor_shift(&self, x: &PAdicInt) -> Result<PAdicPoly> {
        if x.prime() != self.prime {
            return Err(Error::PrimeMismatch(self.prime.get(), x.prime().get()));
        }
        let mut c = self.coeffs.clone();
        let d = self.degree();
        if !x.is_zero_to_precision() {
            for i in 0..d {
                for j in (i..d).rev() {
                    c[j] = c[j].add(&c[j + 1].mul(x)?)?;
                }
            }
        } else if x.precision() < self.effective_precision() {
            for ci in &mut c {
                *ci = ci.truncate(x.precision())?;
            }
        }
        Ok(PAdicPoly { prime: self.prime, coeffs: c })
    }

    /// `f(x + p^s T)` truncated at degree `cap`.
    pub fn ball_substitute(&self, x: &PAdicInt, s: u32, cap: usize) -> Result<PAdicPoly> {
        let shifted = self.taylor_shift(x)?;
        let cap = cap.min(self.degree());
        let coeffs: Vec<PAdicInt> = shifted
            .coeffs
            .into_iter()
            .take(cap + 1)
            .enumerate()
            .map(|(k, c)| c.mul_p_power(k as u32 * s))
            .collect();
        if coeffs.iter().all(PAdicInt::is_zero_to_precision) {
            return Err(Error::exhausted(format!(
                "f(x + p^{s} T) vanishes to working precision"
            )));
        }
        Ok(PAdicPoly { prime: self.prime, coeffs })
    }

    /// `sum_{k <= l} (f_k / f_l) T^k`.
    pub fn normalize_truncate(&self, l: usize) -> Result<PAdicPoly> {
        let lead = self
            .coeffs
            .get(l)
            .ok_or_else(|| Error::PreconditionViolated(format!("index {l} exceeds degree")))?;
        let vl = match lead.valuation() {
            Valuation::Known(v) => v,
            Valuation::AtLeast(_) => return Err(Error::DivisionByAmbiguousZero),
        };
        for (k, c) in self.coeffs[..l].iter().enumerate() {
            match c.valuation().compare(Valuation::Known(vl)) {
                Some(std::cmp::Ordering::Less) => {
                    return Err(Error::PreconditionViolated(format!(
                        "|f_{k}| exceeds |f_{l}|"
                    )))
                }
                Some(_) => {}
                None => return Err(Error::exhausted(format!("cannot compare |f_{k}| with |f_{l}|"))),
            }
        }
        let coeffs = self.coeffs[..=l]
            .iter()
            .map(|c| c.div(lead))
            .collect::<Result<Vec<_>>>()?;
        Ok(PAdicPoly { prime: self.prime, coeffs })
    }

    /// Drops coefficients above index `l`.
    pub fn truncate_degree(&self, l: usize) -> PAdicPoly {
        PAdicPoly {
            prime: self.prime,
            coeffs: self.coeffs[..=l.min(self.degree())].to_vec(),
        }
    }

    /// Coefficient-wise difference, padding the shorter operand with zeros.
    pub fn sub(&self, other: &PAdicPoly) -> Result<PAdicPoly> {
        if other.prime != self.prime {
            return Err(Error::PrimeMismatch(self.prime.get(), other.prime.get()));
        }
        let b = self.effective_precision().min(other.effective_precision());
        let zero = PAdicInt::zero(self.prime, b)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).unwrap_or(&zero);
                let c = other.coeffs.get(k).unwrap_or(&zero);
                a.sub(c)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PAdicPoly { prime: self.prime, coeffs })
    }

    /// Multiplies every coefficient by a scalar.
    pub fn scale(&self, c: &PAdicInt) -> Result<PAdicPoly> {
        let coeffs = self.coeffs.iter().map(|a| a.mul(c)).collect::<Result<Vec<_>>>()?;
        Ok(PAdicPoly { prime: self.prime, coeffs })
    }

    pub fn residues(&self) -> Vec<BigUint> {
        self.coeffs.iter().map(|c| c.value().clone()).collect()
    }
}

impl fmt::Display for PAdicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero_to_precision())
            .map(|(k, c)| match k {
                0 => c.value().to_string(),
                1 => format!("{}*T", c.value()),
                _ => format!("{}*T^{k}", c.value()),
            })
            .collect();
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        write!(f, "{body} + O({}^{})", self.prime, self.effective_precision())
    }
}
