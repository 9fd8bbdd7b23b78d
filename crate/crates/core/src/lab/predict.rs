//! Closed-form laws for random p-adic polynomials, as exact rationals.
//!
//! Nothing here touches the sampler; the experiments compare against these.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `p^e` for any integer `e`.
pub fn p_pow(p: u64, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base, e.unsigned_abs() as usize).recip()
    }
}

/// `P(St(f; x, 1) = l) = (1 - p^{-1}) / (1 - p^{-(d+1)}) p^{l - d}`.
pub fn st_unit_probability(p: u64, degree: usize, l: usize) -> BigRational {
    let d = degree as i64;
    (rat(1) - p_pow(p, -1)) / (rat(1) - p_pow(p, -(d + 1))) * p_pow(p, l as i64 - d)
}

/// `E St(f; x, 1) = d + (d+1)/(p^{d+1} - 1) - 1/(p - 1)`.
pub fn st_unit_mean(p: u64, degree: usize) -> BigRational {
    let d = degree as i64;
    rat(d) + rat(d + 1) / (p_pow(p, d + 1) - rat(1)) - rat(1) / rat(p as i64 - 1)
}

/// Variance of the law [`st_unit_probability`], for standard errors.
pub fn st_unit_variance(p: u64, degree: usize) -> BigRational {
    let second: BigRational = (0..=degree)
        .map(|l| rat((l * l) as i64) * st_unit_probability(p, degree, l))
        .sum();
    let mean = st_unit_mean(p, degree);
    second - &mean * &mean
}

/// `(4/3) p^{-s l(l+1)/2}`, the tail bound for `P(St(f; x, p^{-s}) >= l)`.
pub fn st_ball_tail_bound(p: u64, s: u32, l: usize) -> BigRational {
    let l = l as i64;
    rat(4) / rat(3) * p_pow(p, -(s as i64) * l * (l + 1) / 2)
}

/// `2 (1 + (k / (s ln p))^{k/2})`, bounding the expected sum over the `p^s`
/// balls of scale `s` of `St^k`. Irrational, hence a float.
pub fn st_ball_sum_bound(p: u64, s: u32, k: u32) -> f64 {
    let k = f64::from(k);
    2.0 * (1.0 + (k / (f64::from(s) * (p as f64).ln())).powf(k / 2.0))
}

/// The per-ball form `2 p^{-s} (1 + (k / (s ln p))^{k/2})`.
pub fn st_ball_moment_bound(p: u64, s: u32, k: u32) -> f64 {
    (p as f64).powi(-(s as i32)) * st_ball_sum_bound(p, s, k)
}

/// `p^{-2s}`, bounding `P(kappa(f, x) >= p^s)`.
pub fn kappa_local_tail_upper(p: u64, s: u32) -> BigRational {
    p_pow(p, -2 * s as i64)
}

/// `p^{-2s} / 2`, a lower bound on the same tail when `d >= 2`.
pub fn kappa_local_tail_lower(p: u64, s: u32) -> BigRational {
    kappa_local_tail_upper(p, s) / rat(2)
}

/// `p^{-s}`, bounding `P(kappa(f) >= p^s)`.
pub fn kappa_global_tail_upper(p: u64, s: u32) -> BigRational {
    p_pow(p, -(s as i64))
}

/// `P(||x|| / ||x_{1..r}|| >= p^s) = (1 - p^{r-n}) / (1 - p^{-n}) p^{-rs}` for
/// `x` uniform in `Z_p^n`.
pub fn projection_tail(n: usize, r: usize, p: u64, s: u32) -> BigRational {
    let (n, r) = (n as i64, r as i64);
    (rat(1) - p_pow(p, r - n)) / (rat(1) - p_pow(p, -n)) * p_pow(p, -r * s as i64)
}

/// `1 + 1/(p - 1)`, bounding the mean depth of the subdivision tree.
pub fn mean_depth_bound(p: u64) -> BigRational {
    rat(1) + rat(1) / rat(p as i64 - 1)
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Whether `r` is `1`.
pub fn is_one(r: &BigRational) -> bool {
    r.is_one()
}
