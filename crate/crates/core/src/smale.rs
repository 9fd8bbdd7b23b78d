//! Newton's method over `Z_p` with Smale's alpha/beta/gamma certificates.
//!
//! All three parameters are powers of `p` (gamma with a rational exponent of
//! denominator at most `d - 1`), so certification reduces to exact
//! exponent arithmetic:
//!
//! - `beta(f, x)  = |f(x) / f'(x)|`
//! - `gamma(f, x) = max_{k >= 2} |f^(k)(x) / (k! f'(x))|^{1/(k-1)}`
//! - `alpha(f, x) = beta(f, x) gamma(f, x)`
//!
//! and `alpha < 1` guarantees quadratic convergence of the Newton sequence
//! to the unique root within distance `beta`.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::counting::{strassman_count_ball, Ball};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::padic::{PAdicInt, Valuation};
use crate::poly::PAdicPoly;

/// Smale parameters as exponents: each quantity is `p^{-exponent}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmaleData {
    pub alpha: Exponent,
    pub beta: Exponent,
    pub gamma: Exponent,
}

impl SmaleData {
    pub const SINGULAR: SmaleData = SmaleData {
        alpha: Exponent::NegInfinity,
        beta: Exponent::NegInfinity,
        gamma: Exponent::NegInfinity,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certification {
    pub certified: bool,
    pub data: SmaleData,
}

/// `N_f(x) = x - f(x)/f'(x)`, at the precision left after the division.
pub fn newton_step(f: &PAdicPoly, x: &PAdicInt) -> Result<PAdicInt> {
    let (fx, dfx) = f.eval_with_derivative(x)?;
    if dfx.is_zero_to_precision() {
        return Err(Error::SingularDerivative);
    }
    let q = fx.div(&dfx)?;
    x.sub(&q)
}

/// Exact Smale parameters of `f` at `x`.
pub fn smale_params(f: &PAdicPoly, x: &PAdicInt) -> Result<SmaleData> {
    if f.degree() == 0 {
        return Err(Error::SingularDerivative);
    }
    let taylor = f.taylor_shift(x)?;
    let c = taylor.valuations();
    let v1 = match c[1] {
        Valuation::Known(v) => v as i64,
        Valuation::AtLeast(_) => return Err(Error::SingularDerivative),
    };
    let beta = match c[0] {
        Valuation::Known(v0) => Exponent::exact(v0 as i64 - v1),
        Valuation::AtLeast(b0) => Exponent::AtLeast(Rational64::from_integer(b0 as i64 - v1)),
    };

    let mut exact_min: Option<Rational64> = None;
    let mut bound_min: Option<Rational64> = None;
    for (k, v) in c.iter().enumerate().skip(2) {
        let den = (k - 1) as i64;
        match *v {
            Valuation::Known(vk) => {
                let e = Rational64::new(vk as i64 - v1, den);
                exact_min = Some(exact_min.map_or(e, |m| m.min(e)));
            }
            Valuation::AtLeast(bk) => {
                let e = Rational64::new(bk as i64 - v1, den);
                bound_min = Some(bound_min.map_or(e, |m| m.min(e)));
            }
        }
    }
    let gamma = match (exact_min, bound_min) {
        (None, None) => Exponent::PosInfinity,
        (Some(e), None) => Exponent::Exact(e),
        (Some(e), Some(b)) if b >= e => Exponent::Exact(e),
        (Some(e), Some(b)) => Exponent::AtLeast(e.min(b)),
        (None, Some(b)) => Exponent::AtLeast(b),
    };
    Ok(SmaleData { alpha: beta + gamma, beta, gamma })
}

/// The alpha criterion: certified iff `alpha(f, x) < 1` is provable at working precision.
pub fn certify(f: &PAdicPoly, x: &PAdicInt) -> Certification {
    match smale_params(f, x) {
        Ok(data) => Certification {
            certified: data.alpha.surely_gt(Rational64::from_integer(0)),
            data,
        },
        Err(_) => Certification { certified: false, data: SmaleData::SINGULAR },
    }
}

/// The Newton sequence from a ball center, with parameters at every iterate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementTrace {
    pub ball: Ball,
    pub iterates: Vec<PAdicIntRepr>,
    pub params: Vec<SmaleData>,
    /// The last iterate is a root to full working precision.
    pub converged: bool,
}

impl RefinementTrace {
    pub fn beta_exponents(&self) -> Vec<Exponent> {
        self.params.iter().map(|d| d.beta).collect()
    }

    pub fn last(&self) -> &PAdicIntRepr {
        self.iterates.last().expect("trace starts with the center")
    }
}

/// Serializable snapshot of an iterate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PAdicIntRepr {
    #[serde(with = "crate::serde_decimal")]
    pub value: num_bigint::BigUint,
    pub precision: u32,
}

impl From<&PAdicInt> for PAdicIntRepr {
    fn from(x: &PAdicInt) -> Self {
        PAdicIntRepr { value: x.value().clone(), precision: x.precision() }
    }
}

/// Runs up to `steps` Newton steps from the center of a ball with Strassman count 1.
///
/// Each new iterate is re-embedded at the working precision of `f`; the
/// sequence stops early once `f` vanishes at an iterate to that precision.
pub fn refine(f: &PAdicPoly, ball: &Ball, steps: usize) -> Result<RefinementTrace> {
    let count = strassman_count_ball(f, ball)?;
    if count != 1 {
        return Err(Error::PreconditionViolated(format!(
            "refinement needs Strassman count 1 on {ball}, found {count}"
        )));
    }
    let b = f.effective_precision();
    let mut x = ball.center_at(b)?;
    let mut iterates = vec![PAdicIntRepr::from(&x)];
    let mut params = vec![smale_params(f, &x)?];
    let mut converged = false;
    for _ in 0..steps {
        if matches!(params.last().map(|d| d.beta), Some(Exponent::AtLeast(_))) {
            converged = true;
            break;
        }
        let stepped = newton_step(f, &x)?;
        iterates.push(PAdicIntRepr::from(&stepped));
        x = stepped.reembed(b)?;
        params.push(smale_params(f, &x)?);
    }
    if matches!(params.last().map(|d| d.beta), Some(Exponent::AtLeast(_))) {
        converged = true;
    }
    Ok(RefinementTrace { ball: ball.clone(), iterates, params, converged })
}

/// Local separation `Delta_zeta(f) = 1/gamma(f, zeta)` at the root isolated by `ball`.
///
/// Under `alpha(f, x) < 1` the root sits at distance `beta` from the center
/// and `gamma(f, zeta) = gamma(f, x)`, so the center suffices.
pub fn separation(f: &PAdicPoly, ball: &Ball) -> Result<Exponent> {
    let x = ball.center_at(f.effective_precision())?;
    let cert = certify(f, &x);
    if !cert.certified {
        return Err(Error::PreconditionViolated(format!("center of {ball} is not alpha-certified")));
    }
    cert.data
        .gamma
        .recip()
        .ok_or_else(|| Error::exhausted("gamma only known as a bound"))
}

/// Outcome of checking an inequality between exponents at finite precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    Violated,
    /// One side is only known as a bound that does not decide the inequality.
    Unobservable,
}

/// Checks `lhs >= rhs` on exponents (quantity `lhs` at most quantity `rhs`).
pub fn check_ge(lhs: Exponent, rhs: Exponent) -> Verdict {
    use Exponent::*;
    match (lhs, rhs) {
        (_, NegInfinity) | (PosInfinity, _) => Verdict::Holds,
        (NegInfinity, _) => Verdict::Violated,
        (Exact(a), Exact(b)) => if a >= b { Verdict::Holds } else { Verdict::Violated },
        (AtLeast(a), Exact(b) | AtLeast(b)) if a >= b => Verdict::Holds,
        (Exact(_), PosInfinity) => Verdict::Violated,
        _ => Verdict::Unobservable,
    }
}

/// Checks exponent equality.
pub fn check_eq(lhs: Exponent, rhs: Exponent) -> Verdict {
    if !lhs.is_exact() || !rhs.is_exact() {
        return Verdict::Unobservable;
    }
    if lhs == rhs { Verdict::Holds } else { Verdict::Violated }
}

/// The variation bounds along one certified Newton step `x -> N_f(x)`:
/// `alpha' <= alpha^2`, `beta' <= alpha beta` and `gamma' = gamma`.
pub fn newton_step_variation(before: &SmaleData, after: &SmaleData) -> [Verdict; 3] {
    [
        check_ge(after.alpha, before.alpha + before.alpha),
        check_ge(after.beta, before.alpha + before.beta),
        check_eq(after.gamma, before.gamma),
    ]
}
