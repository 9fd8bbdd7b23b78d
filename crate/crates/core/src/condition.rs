//! Condition numbers `kappa(f, x) = ||f|| / max(|f(x)|, |f'(x)|)` and their uses.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::counting::{strassman_count_ball, Ball};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::padic::{PAdicInt, Valuation};
use crate::poly::PAdicPoly;

/// `kappa = p^e`, or infinite when `f` is singular at the point to working precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "exponent")]
pub enum KappaValue {
    Finite(u32),
    Infinite,
}

impl KappaValue {
    pub fn exponent(self) -> Option<u32> {
        match self {
            KappaValue::Finite(e) => Some(e),
            KappaValue::Infinite => None,
        }
    }
}

impl fmt::Display for KappaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KappaValue::Finite(e) => write!(f, "p^{e}"),
            KappaValue::Infinite => write!(f, "inf"),
        }
    }
}

/// `min(v(f(x)), v(f'(x))) - v(||f||)`.
pub fn kappa_local(f: &PAdicPoly, x: &PAdicInt) -> Result<KappaValue> {
    let norm = f.gauss_norm_exponent()?;
    let (fx, dfx) = f.eval_with_derivative(x)?;
    let denom = match (fx.valuation(), dfx.valuation()) {
        (Valuation::AtLeast(_), Valuation::AtLeast(_)) => return Ok(KappaValue::Infinite),
        (a, b) => a
            .min(b)
            .and_then(Valuation::known)
            .ok_or_else(|| Error::exhausted("max(|f(x)|, |f'(x)|) undecidable"))?,
    };
    Ok(KappaValue::Finite(denom - norm))
}

/// Global condition number with the subdivision that computed it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalKappa {
    pub kappa: KappaValue,
    /// Closed balls with the exponent of `kappa` on each; together they partition `Z_p`.
    pub balls: Vec<(Ball, u32)>,
    /// Largest scale reached.
    pub depth: u32,
}

/// `kappa(f) = sup_{z in Z_p} kappa(f, z)`, by subdivision.
///
/// A ball `B(x, p^{-s})` is closed once `kappa(f, x) < p^s`: every point in
/// it then has the same condition number as `x`. Balls are never split past
/// the working precision; reaching it means `kappa(f) = inf` at that
/// precision and is reported as `MaxDepthExceeded`.
pub fn kappa_global_report(f: &PAdicPoly) -> Result<GlobalKappa> {
    let prime = f.prime();
    let b = f.effective_precision();
    let mut stack: Vec<Ball> = Ball::unit(prime).children();
    let mut balls = Vec::new();
    let mut depth = 1;
    let mut sup = 0;
    while let Some(ball) = stack.pop() {
        depth = depth.max(ball.scale);
        let x = ball.center_at(b)?;
        let closed = match kappa_local(f, &x)? {
            KappaValue::Finite(e) if e < ball.scale => Some(e),
            _ => None,
        };
        match closed {
            Some(e) => {
                sup = sup.max(e);
                balls.push((ball, e));
            }
            None if ball.scale >= b => return Err(Error::MaxDepthExceeded(ball.scale, ball.scale)),
            None => stack.extend(ball.children().into_iter().rev()),
        }
    }
    balls.sort();
    Ok(GlobalKappa { kappa: KappaValue::Finite(sup), balls, depth })
}

pub fn kappa_global(f: &PAdicPoly) -> Result<KappaValue> {
    kappa_global_report(f).map(|g| g.kappa)
}

/// Digits of precision that guarantee a correct run of the solver:
/// `1 + v(||f||) + max(d, (1 + log_p kappa(f)) * max_n St(f; n, p^{-1}))`,
/// with `n` over all residues mod `p`.
pub fn required_precision(f: &PAdicPoly) -> Result<u32> {
    let norm = f.gauss_norm_exponent()?;
    let e = kappa_global(f)?.exponent().expect("global kappa is finite when computed");
    let max_count = (0..f.prime().get())
        .map(|n| strassman_count_ball(f, &Ball::new(f.prime(), BigUint::from(n), 1)))
        .try_fold(0, |m, c| c.map(|c| m.max(c)))?;
    let degree = f.degree() as u32;
    Ok(1 + norm + degree.max((1 + e) * max_count as u32))
}

/// Whether `kappa(f)^2 ||f~ - f|| / ||f|| < 1`, which makes `f~` and `f`
/// have the same number of roots in `Z_p`.
pub fn truncation_safe(f: &PAdicPoly, f_tilde: &PAdicPoly) -> Result<bool> {
    let norm = f.gauss_norm_exponent()?;
    let e = kappa_global(f)?.exponent().expect("global kappa is finite when computed");
    let threshold = 2 * e + norm;
    let vals = f_tilde.sub(f)?.valuations();
    let lower = vals.iter().map(|v| v.lower_bound()).min().expect("non-empty");
    if lower > threshold {
        return Ok(true);
    }
    match vals.iter().filter_map(|v| v.known()).min() {
        Some(m) if m <= lower => Ok(m > threshold),
        _ => Err(Error::exhausted("perturbation size undecidable against the safety margin")),
    }
}

/// Distance from `f` to the polynomials singular at `x`, with the nearest one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularDistance {
    /// `dist = p^{-exponent}`; `PosInfinity` when `f` itself is singular at `x`.
    pub exponent: Exponent,
    /// `f - f(x) - f'(x)(T - x)`, which has a double root at `x`.
    pub witness: PAdicPoly,
}

/// `dist(f, Sigma_x) = ||f|| / kappa(f, x)`.
pub fn dist_to_singular(f: &PAdicPoly, x: &PAdicInt) -> Result<SingularDistance> {
    let norm = f.gauss_norm_exponent()?;
    let exponent = match kappa_local(f, x)? {
        KappaValue::Finite(e) => Exponent::exact(i64::from(norm + e)),
        KappaValue::Infinite => Exponent::PosInfinity,
    };
    let (fx, dfx) = f.eval_with_derivative(x)?;
    let tangent = PAdicPoly::new(f.prime(), vec![fx.sub(&dfx.mul(x)?)?, dfx])?;
    Ok(SingularDistance { exponent, witness: f.sub(&tangent)? })
}
