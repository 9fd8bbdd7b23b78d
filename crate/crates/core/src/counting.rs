//! Strassman counts on `Z_p` and on closed balls.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::newton_polygon::newton_polygon;
use crate::padic::{PAdicInt, Valuation};
use crate::poly::PAdicPoly;
use crate::prime::Prime;

/// The closed ball `center + p^scale Z_p`, with `center` canonical in `[0, p^scale)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ball {
    pub prime: Prime,
    pub scale: u32,
    #[serde(with = "crate::serde_decimal")]
    pub center: BigUint,
}

impl Ball {
    pub fn new(prime: Prime, center: BigUint, scale: u32) -> Self {
        let center = if scale == 0 { BigUint::zero() } else { center.mod_floor(&prime.pow(scale)) };
        Ball { prime, scale, center }
    }

    /// The whole of `Z_p`.
    pub fn unit(prime: Prime) -> Self {
        Ball { prime, scale: 0, center: BigUint::zero() }
    }

    /// Whether the p-adic integer represented by `x` lies in the ball.
    pub fn contains_point(&self, x: &BigUint) -> bool {
        Ball::new(self.prime, x.clone(), self.scale).center == self.center
    }

    /// Whether `other` is contained in `self`.
    pub fn contains(&self, other: &Ball) -> bool {
        other.prime == self.prime && other.scale >= self.scale && self.contains_point(&other.center)
    }

    pub fn is_disjoint(&self, other: &Ball) -> bool {
        !(self.contains(other) || other.contains(self))
    }

    /// The `p` balls of scale `scale + 1` partitioning this one.
    pub fn children(&self) -> Vec<Ball> {
        let step = self.prime.pow(self.scale);
        (0..self.prime.get())
            .map(|a| Ball {
                prime: self.prime,
                scale: self.scale + 1,
                center: &self.center + &step * BigUint::from(a),
            })
            .collect()
    }

    /// The center as an element of `Z_p` at the given precision.
    pub fn center_at(&self, precision: u32) -> Result<PAdicInt> {
        PAdicInt::from_residue(self.center.clone(), self.prime, precision)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}^{} Z_{}", self.center, self.prime, self.scale, self.prime)
    }
}

/// `St(f)`: the largest `k` with `|f_l| <= |f_k|` for every `l < k`.
///
/// That is the last index attaining the minimal coefficient valuation. A
/// coefficient vanishing modulo `p^b` with `b` not above that minimum could
/// move the answer in either direction, so it aborts the count.
pub fn strassman_count(f: &PAdicPoly) -> Result<usize> {
    let vals = f.valuations();
    let min = vals
        .iter()
        .filter_map(|v| v.known())
        .min()
        .ok_or_else(|| Error::exhausted("polynomial vanishes to working precision"))?;
    if let Some((k, b)) = vals.iter().enumerate().find_map(|(k, v)| match v {
        Valuation::AtLeast(b) if *b <= min => Some((k, *b)),
        _ => None,
    }) {
        return Err(Error::exhausted(format!(
            "coefficient {k} vanishes to precision {b}, not above the minimum valuation {min}"
        )));
    }
    Ok(vals
        .iter()
        .rposition(|v| *v == Valuation::Known(min))
        .expect("minimum is attained"))
}

/// `St(f; x, p^{-s}) = St(f(x + p^s T))`.
pub fn strassman_count_ball(f: &PAdicPoly, ball: &Ball) -> Result<usize> {
    if ball.prime != f.prime() {
        return Err(Error::PrimeMismatch(f.prime().get(), ball.prime.get()));
    }
    let x = ball.center_at(f.effective_precision())?;
    let h = f.ball_substitute(&x, ball.scale, f.degree())?;
    strassman_count(&h)
}

/// Number of roots of `f` in `C_p` with `|z| <= 1`, read off the Newton polygon.
pub fn unit_ball_root_count(f: &PAdicPoly) -> Result<usize> {
    Ok(newton_polygon(f)?.unit_ball_roots())
}
