//! Elements of `Z_p` known to a finite absolute precision (the flat model).
//!
//! An element is a residue `value` in `[0, p^b)` together with its absolute
//! precision `b`. Ring operations keep the smaller of the two precisions;
//! dividing by `p^k u` (with `u` a unit) costs `k` digits.

use std::cell::{Cell, RefCell};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prime::Prime;

thread_local! {
    static MODULI: RefCell<HashMap<(u64, u32), BigUint>> = RefCell::new(HashMap::new());
    static RING_OPS: Cell<u64> = const { Cell::new(0) };
}

/// Ring operations (add, sub, mul, div) performed so far on this thread.
pub fn ring_ops() -> u64 {
    RING_OPS.with(Cell::get)
}

fn tick() {
    RING_OPS.with(|n| n.set(n.get() + 1));
}

/// Runs `f` with `p^b`, memoized per thread.
pub(crate) fn with_modulus<R>(p: Prime, b: u32, f: impl FnOnce(&BigUint) -> R) -> R {
    MODULI.with(|cache| {
        let mut cache = cache.borrow_mut();
        let m = cache.entry((p.get(), b)).or_insert_with(|| p.pow(b));
        f(m)
    })
}

/// A p-adic valuation as far as the working precision can tell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Valuation {
    /// The exact valuation.
    Known(u32),
    /// The element vanishes modulo `p^b`; its valuation is at least `b`.
    AtLeast(u32),
}

impl Valuation {
    pub fn known(self) -> Option<u32> {
        match self {
            Valuation::Known(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// The largest value the valuation is guaranteed to be at least.
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Known(v) | Valuation::AtLeast(v) => v,
        }
    }

    /// Compares two valuations; `None` when the working precision cannot decide.
    pub fn compare(self, other: Valuation) -> Option<Ordering> {
        use Valuation::*;
        match (self, other) {
            (Known(a), Known(b)) => Some(a.cmp(&b)),
            (Known(a), AtLeast(b)) if a < b => Some(Ordering::Less),
            (AtLeast(a), Known(b)) if b < a => Some(Ordering::Greater),
            _ => None,
        }
    }

    /// Minimum of two valuations, `None` when ambiguous.
    pub fn min(self, other: Valuation) -> Option<Valuation> {
        use Valuation::*;
        match (self, other) {
            (AtLeast(a), AtLeast(b)) => Some(AtLeast(a.min(b))),
            _ => match self.compare(other)? {
                Ordering::Greater => Some(other),
                _ => Some(self),
            },
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Known(v) => write!(f, "{v}"),
            Valuation::AtLeast(b) => write!(f, ">= {b}"),
        }
    }
}

/// An element of `Z_p` to absolute precision `b`: `value + O(p^b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdicInt {
    prime: Prime,
    precision: u32,
    value: BigUint,
}

impl PAdicInt {
    /// Embeds an integer, reducing it modulo `p^b`.
    pub fn from_integer(n: &BigInt, prime: Prime, precision: u32) -> Result<Self> {
        check_precision(precision)?;
        let value = with_modulus(prime, precision, |m| {
            let m = BigInt::from_biguint(Sign::Plus, m.clone());
            n.mod_floor(&m)
                .to_biguint()
                .expect("mod_floor by a positive modulus is non-negative")
        });
        Ok(PAdicInt { prime, precision, value })
    }

    pub fn from_i64(n: i64, prime: Prime, precision: u32) -> Result<Self> {
        Self::from_integer(&BigInt::from(n), prime, precision)
    }

    /// Builds an element from a natural number, reducing it modulo `p^b`.
    pub fn from_residue(value: BigUint, prime: Prime, precision: u32) -> Result<Self> {
        check_precision(precision)?;
        Ok(Self::reduced(value, prime, precision))
    }

    pub(crate) fn reduced(value: BigUint, prime: Prime, precision: u32) -> Self {
        let value = with_modulus(prime, precision, |m| if &value < m { value } else { value % m });
        PAdicInt { prime, precision, value }
    }

    pub fn zero(prime: Prime, precision: u32) -> Result<Self> {
        check_precision(precision)?;
        Ok(PAdicInt { prime, precision, value: BigUint::zero() })
    }

    pub fn one(prime: Prime, precision: u32) -> Result<Self> {
        Self::from_residue(BigUint::one(), prime, precision)
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.prime
    }

    #[inline]
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// The canonical residue in `[0, p^b)`.
    #[inline]
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.value.is_zero()
    }

    pub fn valuation(&self) -> Valuation {
        if self.value.is_zero() {
            return Valuation::AtLeast(self.precision);
        }
        let p = self.prime.get();
        if p == 2 {
            return Valuation::Known(self.value.trailing_zeros().unwrap_or(0) as u32);
        }
        let p_big = self.prime.to_biguint();
        let mut v = 0;
        let mut rest = self.value.clone();
        loop {
            let (q, r) = rest.div_rem(&p_big);
            if !r.is_zero() {
                break;
            }
            rest = q;
            v += 1;
        }
        Valuation::Known(v)
    }

    /// The exponent `e` with `|x| = p^{-e}`; identical to the valuation.
    pub fn norm_exponent(&self) -> Valuation {
        self.valuation()
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Known(0)
    }

    /// Drops digits so that the element is known modulo `p^b` only.
    pub fn truncate(&self, precision: u32) -> Result<Self> {
        check_precision(precision)?;
        if precision >= self.precision {
            return Ok(self.clone());
        }
        Ok(Self::reduced(self.value.clone(), self.prime, precision))
    }

    /// Reinterprets the canonical representative as an exact integer and
    /// embeds it at a new precision. Lifting a point (not a computed value)
    /// to more digits is always legitimate.
    pub fn reembed(&self, precision: u32) -> Result<Self> {
        Self::from_residue(self.value.clone(), self.prime, precision)
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.prime == other.prime {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.prime.get(), other.prime.get()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        tick();
        self.same_prime(other)?;
        let b = self.precision.min(other.precision);
        Ok(Self::reduced(&self.value + &other.value, self.prime, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        tick();
        self.same_prime(other)?;
        let b = self.precision.min(other.precision);
        let value = with_modulus(self.prime, b, |m| {
            let a = &self.value % m;
            let c = &other.value % m;
            if a >= c {
                a - c
            } else {
                m - c + a
            }
        });
        Ok(PAdicInt { prime: self.prime, precision: b, value })
    }

    pub fn neg(&self) -> Self {
        if self.value.is_zero() {
            return self.clone();
        }
        let value = with_modulus(self.prime, self.precision, |m| m - &self.value);
        PAdicInt { prime: self.prime, precision: self.precision, value }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        tick();
        self.same_prime(other)?;
        let b = self.precision.min(other.precision);
        Ok(Self::reduced(&self.value * &other.value, self.prime, b))
    }

    /// Multiplies by the exact power `p^k`, keeping the absolute precision.
    pub fn mul_p_power(&self, k: u32) -> Self {
        if k == 0 {
            return self.clone();
        }
        if k >= self.precision {
            return PAdicInt { prime: self.prime, precision: self.precision, value: BigUint::zero() };
        }
        Self::reduced(&self.value * self.prime.pow(k), self.prime, self.precision)
    }

    /// Division `self / d` with the flat-model precision loss of `val(d)` digits.
    pub fn div(&self, d: &Self) -> Result<Self> {
        tick();
        self.same_prime(d)?;
        let k = match d.valuation() {
            Valuation::Known(k) => k,
            Valuation::AtLeast(_) => return Err(Error::DivisionByAmbiguousZero),
        };
        let base = self.precision.min(d.precision);
        if base <= k {
            return Err(Error::exhausted(format!(
                "dividing by an element of valuation {k} at precision {base}"
            )));
        }
        let b = base - k;
        if let Valuation::Known(v) = self.valuation() {
            if v < k {
                return Err(Error::NotDivisible);
            }
        }
        let pk = self.prime.pow(k);
        let num = &self.value / &pk;
        let unit = &d.value / &pk;
        let inv = with_modulus(self.prime, b, |m| mod_inverse(&(unit % m), m))
            .expect("unit part is invertible modulo p^b");
        Ok(Self::reduced(num * inv, self.prime, b))
    }
}

fn check_precision(b: u32) -> Result<()> {
    if b == 0 {
        Err(Error::InvalidPrecision(b))
    } else {
        Ok(())
    }
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub(crate) fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    if m.is_one() {
        return Some(BigUint::zero());
    }
    let a = BigInt::from_biguint(Sign::Plus, a.clone());
    let m_int = BigInt::from_biguint(Sign::Plus, m.clone());
    let egcd = a.extended_gcd(&m_int);
    if !egcd.gcd.is_one() {
        return None;
    }
    egcd.x.mod_floor(&m_int).to_biguint()
}

impl fmt::Display for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.value, self.prime, self.precision)
    }
}
