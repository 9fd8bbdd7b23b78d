//! Independent oracles: exact integer arithmetic only, no library shortcuts.
#![allow(dead_code)]

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use strassman::{IntPoly, PAdicInt, PAdicPoly, Prime};

pub fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

/// `v_p(n)`, or `None` for `n = 0`.
pub fn vp(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    Some(v)
}

/// `v_p(n)` capped at `cap` (what precision `cap` can see).
pub fn vp_capped(n: &BigInt, p: u64, cap: u32) -> u32 {
    vp(n, p).map_or(cap, |v| v.min(cap))
}

pub fn eval(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

pub fn derivative(coeffs: &[BigInt]) -> Vec<BigInt> {
    if coeffs.len() <= 1 {
        return vec![BigInt::zero()];
    }
    coeffs.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect()
}

/// Minimum coefficient valuation, capped.
pub fn norm_valuation(coeffs: &[BigInt], p: u64, cap: u32) -> u32 {
    coeffs.iter().map(|c| vp_capped(c, p, cap)).min().unwrap()
}

/// Integer coefficients of a p-adic polynomial (its residues).
pub fn residues(f: &PAdicPoly) -> Vec<BigInt> {
    f.coeffs().iter().map(|c| BigInt::from(c.value().clone())).collect()
}

pub fn padic(coeffs: &[BigInt], p: u64, b: u32) -> PAdicPoly {
    IntPoly::new(coeffs.to_vec()).unwrap().to_padic(prime(p), b).unwrap()
}

pub fn point(x: &BigInt, p: u64, b: u32) -> PAdicInt {
    PAdicInt::from_integer(x, prime(p), b).unwrap()
}

pub fn to_int(x: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x.clone())
}

/// Determinant of an integer matrix by fraction-free Gaussian elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// `Res(f, g)` as the Sylvester determinant.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut r = vec![BigInt::zero(); size];
        for (j, c) in f.iter().rev().enumerate() {
            r[i + j] = c.clone();
        }
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![BigInt::zero(); size];
        for (j, c) in g.iter().rev().enumerate() {
            r[i + j] = c.clone();
        }
        rows.push(r);
    }
    bareiss_det(rows)
}

/// Square-free over `Q`, hence all roots in `C_p` simple. Requires a nonzero leading coefficient.
pub fn is_square_free(f: &[BigInt]) -> bool {
    let d = f.len() - 1;
    d <= 1 || !resultant(f, &derivative(f)).is_zero()
}

/// A random square-free integer polynomial with `|coefficients| <= bound` and nonzero leading coefficient.
pub fn random_square_free<R: Rng>(rng: &mut R, degree: usize, bound: i64) -> Vec<BigInt> {
    loop {
        let mut c: Vec<BigInt> = (0..=degree).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
        if c[degree].is_zero() {
            c[degree] = BigInt::one();
        }
        if is_square_free(&c) {
            return c;
        }
    }
}

/// A root of `f` in `Z_p`, known modulo `p^digits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedRoot {
    pub residue: BigInt,
    pub digits: u32,
}

/// All roots of `f` in `Z_p` by exhaustive lifting of the solutions of
/// `f = 0 mod p^k`, level by level, until every surviving class `x` has
/// `k > 2 v(f'(x))` (Hensel) and pins its root to at least `min_digits` digits.
pub fn roots_by_enumeration(f: &[BigInt], p: u64, min_digits: u32) -> Vec<LiftedRoot> {
    let df = derivative(f);
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut classes: Vec<BigInt> = (0..p)
        .map(BigInt::from)
        .filter(|a| (eval(f, a) % &pb).is_zero())
        .collect();
    let mut k = 1u32;
    loop {
        let settled = classes.iter().all(|x| match vp(&eval(&df, x), p) {
            Some(v) => k > 2 * v && k >= min_digits + v,
            None => false,
        });
        if settled {
            break;
        }
        let next = &modulus * &pb;
        let step = &modulus;
        classes = classes
            .iter()
            .flat_map(|x| (0..p).map(move |a| x + BigInt::from(a) * step))
            .filter(|y| eval(f, y).mod_floor(&next).is_zero())
            .collect();
        modulus = next;
        k += 1;
        assert!(k < 200, "root enumeration does not settle");
    }
    let mut roots: Vec<LiftedRoot> = Vec::new();
    for x in classes {
        let v = vp(&eval(&df, &x), p).unwrap();
        let digits = k - v;
        let m = num_traits::pow(pb.clone(), digits as usize);
        let residue = x.mod_floor(&m);
        if !roots.iter().any(|r| r.digits == digits && r.residue == residue) {
            roots.push(LiftedRoot { residue, digits });
        }
    }
    roots
}

/// `p^k` as an integer.
pub fn pow(p: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

pub fn big(c: &[i64]) -> Vec<BigInt> {
    c.iter().map(|&x| BigInt::from(x)).collect()
}

/// `f(x + T)` by binomial expansion over the integers.
pub fn shift_exact(f: &[BigInt], x: &BigInt) -> Vec<BigInt> {
    let d = f.len() - 1;
    let mut out = vec![BigInt::zero(); d + 1];
    for (j, c) in f.iter().enumerate() {
        let mut binom = BigInt::one();
        for k in 0..=j {
            // C(j, k) x^(j-k)
            out[k] += c * &binom * num_traits::pow(x.clone(), j - k);
            binom = binom * BigInt::from(j - k) / BigInt::from(k + 1);
        }
    }
    out
}

/// The largest index attaining the minimum coefficient valuation; `None` if every coefficient is 0.
pub fn count_oracle(f: &[BigInt], p: u64) -> Option<usize> {
    let vals: Vec<Option<u32>> = f.iter().map(|c| vp(c, p)).collect();
    let min = vals.iter().flatten().min()?;
    vals.iter().rposition(|v| v.as_ref() == Some(min))
}

pub mod strategies {
    use proptest::prelude::*;

    pub fn small_prime() -> impl Strategy<Value = u64> {
        prop::sample::select(vec![2u64, 3, 5, 7])
    }

    /// Coefficient lists of degree 1..=max_degree with nonzero leading coefficient.
    pub fn coeffs(max_degree: usize, bound: i64) -> impl Strategy<Value = Vec<i64>> {
        (1..=max_degree).prop_flat_map(move |d| {
            (prop::collection::vec(-bound..=bound, d), (1..=bound).prop_flat_map(|m| prop::sample::select(vec![m, -m])))
                .prop_map(|(mut c, lead)| {
                    c.push(lead);
                    c
                })
        })
    }
}

/// `gamma(f, x)` as the exponent `min_{k >= 2} (v(f^(k)(x)/k!) - v(f'(x)))/(k - 1)`
/// over the integers; `None` when every higher Taylor coefficient vanishes.
pub fn gamma_oracle(f: &[BigInt], x: &BigInt, p: u64) -> Option<num_rational::Rational64> {
    let t = shift_exact(f, x);
    let v1 = i64::from(vp(&t[1], p).expect("f'(x) != 0"));
    t.iter()
        .enumerate()
        .skip(2)
        .filter_map(|(k, c)| vp(c, p).map(|v| num_rational::Rational64::new(i64::from(v) - v1, k as i64 - 1)))
        .min()
}
