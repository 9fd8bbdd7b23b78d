//! Roots in `F_p` of the residue polynomial of a unit-norm `g`.
//!
//! Small primes are handled by trying every residue. Otherwise the split
//! linear part `gcd(g, X^p - X)` is extracted and factored by random
//! equal-degree splitting with `gcd(h, (X + c)^((p-1)/2) - 1)`.

use num_traits::ToPrimitive;
use rand::Rng;

use crate::error::{Error, Result};
use crate::padic::Valuation;
use crate::poly::PAdicPoly;
use crate::prime::{mul_mod, pow_mod, Prime};

/// Random splitting attempts allowed per factor.
pub const SPLIT_RETRIES: usize = 64;

/// Floor of the default brute-force threshold.
pub const DEFAULT_BRUTE_FORCE_FLOOR: u64 = 64;

/// A nonzero polynomial over `F_p`, trailing zeros stripped.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    prime: Prime,
    coeffs: Vec<u64>,
}

impl FpPoly {
    /// Builds from residues, which are reduced mod `p`; `None` if the result is zero.
    pub fn new(prime: Prime, coeffs: Vec<u64>) -> Option<Self> {
        let p = prime.get();
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        trim(&mut coeffs);
        if coeffs.is_empty() {
            None
        } else {
            Some(FpPoly { prime, coeffs })
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, a: u64) -> u64 {
        let p = self.prime.get();
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, a, p) + c) % p)
    }
}

/// Coefficient-wise reduction of `g` modulo `p`; requires `||g|| = 1`.
pub fn reduce_mod_p(g: &PAdicPoly) -> Result<FpPoly> {
    let p = g.prime();
    let unit_norm = g.valuations().iter().any(|v| *v == Valuation::Known(0));
    if !unit_norm {
        return Err(Error::PreconditionViolated(
            "reduction mod p needs a polynomial of Gauss norm 1".into(),
        ));
    }
    let pb = p.to_biguint();
    let coeffs = g
        .coeffs()
        .iter()
        .map(|c| (c.value() % &pb).to_u64().expect("residue below p fits in u64"))
        .collect();
    Ok(FpPoly::new(p, coeffs).expect("a unit coefficient survives reduction"))
}

/// Root finder configuration and instrumentation.
#[derive(Debug, Clone, Default)]
pub struct RootFinder {
    /// Brute force when `p <=` this; `None` means `max(64, deg g)`.
    pub brute_force_threshold: Option<u64>,
    /// Multiplications mod p performed so far.
    pub mults: u64,
}

impl RootFinder {
    pub fn new(brute_force_threshold: Option<u64>) -> Self {
        RootFinder { brute_force_threshold, mults: 0 }
    }

    /// The distinct roots of `g` in `F_p`, ascending.
    pub fn roots<R: Rng + ?Sized>(&mut self, g: &FpPoly, rng: &mut R) -> Result<Vec<u64>> {
        let p = g.prime.get();
        let threshold = self
            .brute_force_threshold
            .unwrap_or_else(|| DEFAULT_BRUTE_FORCE_FLOOR.max(g.degree() as u64));
        if g.degree() == 0 {
            return Ok(Vec::new());
        }
        if p == 2 || p <= threshold {
            self.mults += p * g.degree() as u64;
            return Ok((0..p).filter(|&a| g.eval(a) == 0).collect());
        }
        let mut ctx = Fp { p, mults: 0 };
        let monic = ctx.monic(&g.coeffs);
        // X^p - X mod g
        let xp = ctx.pow_x_mod(p, &monic);
        let mut t = xp;
        t.resize(t.len().max(2), 0);
        t[1] = ctx.sub(t[1], 1);
        trim(&mut t);
        let split = ctx.gcd(monic, t);
        let mut roots = Vec::new();
        ctx.split_linear(split, rng, &mut roots)?;
        self.mults += ctx.mults;
        roots.sort_unstable();
        roots.dedup();
        Ok(roots)
    }
}

/// `roots_mod_p` with the default threshold.
pub fn roots_mod_p<R: Rng + ?Sized>(g: &FpPoly, rng: &mut R) -> Result<Vec<u64>> {
    RootFinder::default().roots(g, rng)
}

fn trim(c: &mut Vec<u64>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

/// Dense arithmetic in `F_p[X]` with a multiplication counter.
struct Fp {
    p: u64,
    mults: u64,
}

impl Fp {
    fn mul(&mut self, a: u64, b: u64) -> u64 {
        self.mults += 1;
        mul_mod(a, b, self.p)
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - b + a
        }
    }

    fn inv(&mut self, a: u64) -> u64 {
        self.mults += 64;
        pow_mod(a, self.p - 2, self.p)
    }

    fn monic(&mut self, a: &[u64]) -> Vec<u64> {
        let lead = *a.last().expect("nonzero");
        if lead == 1 {
            return a.to_vec();
        }
        let li = self.inv(lead);
        a.iter().map(|&c| self.mul(c, li)).collect()
    }

    /// Remainder of `a` by the monic `m`.
    fn rem(&mut self, mut a: Vec<u64>, m: &[u64]) -> Vec<u64> {
        let dm = m.len() - 1;
        while a.len() > dm {
            let top = a.pop().expect("len > dm");
            if top != 0 {
                let shift = a.len() - dm;
                for (i, &mc) in m[..dm].iter().enumerate() {
                    let t = self.mul(top, mc);
                    a[shift + i] = self.sub(a[shift + i], t);
                }
            }
        }
        trim(&mut a);
        a
    }

    fn mul_poly(&mut self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + self.mul(x, y)) % self.p;
            }
        }
        trim(&mut out);
        out
    }

    fn mul_mod_poly(&mut self, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
        let prod = self.mul_poly(a, b);
        self.rem(prod, m)
    }

    /// `X^e mod m` by square-and-multiply.
    fn pow_x_mod(&mut self, e: u64, m: &[u64]) -> Vec<u64> {
        self.pow_mod_poly(vec![0, 1], e, m)
    }

    fn pow_mod_poly(&mut self, base: Vec<u64>, mut e: u64, m: &[u64]) -> Vec<u64> {
        let mut acc = self.rem(vec![1], m);
        let mut base = self.rem(base, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_mod_poly(&acc, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_mod_poly(&base, &base, m);
            }
        }
        acc
    }

    /// Monic gcd.
    fn gcd(&mut self, a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
        let (mut a, mut b) = (a, b);
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let bm = self.monic(&b);
            let r = self.rem(a, &bm);
            a = bm;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            self.monic(&a)
        }
    }

    /// Exact quotient of `a` by the monic `m`.
    fn div_exact(&mut self, a: &[u64], m: &[u64]) -> Vec<u64> {
        let dm = m.len() - 1;
        let mut rem = a.to_vec();
        let mut q = vec![0u64; a.len() - dm];
        for k in (0..q.len()).rev() {
            let top = rem[k + dm];
            q[k] = top;
            if top != 0 {
                for (i, &mc) in m.iter().enumerate() {
                    let t = self.mul(top, mc);
                    rem[k + i] = self.sub(rem[k + i], t);
                }
            }
        }
        q
    }

    /// Splits a monic product of distinct linear factors into its roots.
    fn split_linear<R: Rng + ?Sized>(
        &mut self,
        h: Vec<u64>,
        rng: &mut R,
        roots: &mut Vec<u64>,
    ) -> Result<()> {
        match h.len() {
            0 | 1 => return Ok(()),
            2 => {
                // X + c0
                roots.push(self.sub(0, h[0]));
                return Ok(());
            }
            _ => {}
        }
        let half = (self.p - 1) / 2;
        for _ in 0..SPLIT_RETRIES {
            let c = rng.gen_range(0..self.p);
            let mut w = self.pow_mod_poly(vec![c, 1], half, &h);
            if w.is_empty() {
                w.push(0);
            }
            w[0] = self.sub(w[0], 1);
            trim(&mut w);
            let d = self.gcd(h.clone(), w);
            if d.len() > 1 && d.len() < h.len() {
                let other = self.div_exact(&h, &d);
                self.split_linear(d, rng, roots)?;
                return self.split_linear(other, rng, roots);
            }
        }
        Err(Error::RandomnessBudgetExhausted(SPLIT_RETRIES))
    }
}
