mod common;

use common::*;
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use strassman::{Error, PAdicInt, Valuation};

fn residue(x: &PAdicInt) -> BigInt {
    to_int(x.value())
}

proptest! {
    #[test]
    fn ring_axioms_hold_modulo_p_to_the_precision(
        p in strategies::small_prime(), b in 1u32..20, a in any::<i64>(), c in any::<i64>(), e in any::<i64>(),
    ) {
        let (x, y, z) = (point(&a.into(), p, b), point(&c.into(), p, b), point(&e.into(), p, b));
        let m = pow(p, b);
        prop_assert_eq!(residue(&x.add(&y).unwrap()), (BigInt::from(a) + c).mod_floor(&m));
        prop_assert_eq!(residue(&x.sub(&y).unwrap()), (BigInt::from(a) - c).mod_floor(&m));
        prop_assert_eq!(residue(&x.mul(&y).unwrap()), (BigInt::from(a) * c).mod_floor(&m));
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.add(&y).unwrap().add(&z).unwrap(), x.add(&y.add(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(
            x.mul(&y.add(&z).unwrap()).unwrap(),
            x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap()
        );
        prop_assert!(x.add(&x.neg()).unwrap().is_zero_to_precision());
        prop_assert_eq!(x.mul(&PAdicInt::one(x.prime(), b).unwrap()).unwrap(), x.clone());
    }

    #[test]
    fn results_carry_the_smaller_precision(p in strategies::small_prime(), b1 in 1u32..20, b2 in 1u32..20, a in any::<i64>(), c in any::<i64>()) {
        let x = point(&a.into(), p, b1);
        let y = point(&c.into(), p, b2);
        for r in [x.add(&y), x.sub(&y), x.mul(&y)] {
            prop_assert_eq!(r.unwrap().precision(), b1.min(b2));
        }
    }

    #[test]
    fn valuation_matches_the_integer_oracle(p in strategies::small_prime(), b in 1u32..20, a in any::<i64>()) {
        let x = point(&a.into(), p, b);
        let expected = vp(&BigInt::from(a), p).filter(|&v| v < b);
        match expected {
            Some(v) => prop_assert_eq!(x.valuation(), Valuation::Known(v)),
            None => prop_assert_eq!(x.valuation(), Valuation::AtLeast(b)),
        }
    }

    #[test]
    fn ultrametric_inequality(p in strategies::small_prime(), b in 2u32..20, a in any::<i64>(), c in any::<i64>()) {
        let x = point(&a.into(), p, b);
        let y = point(&c.into(), p, b);
        if let (Valuation::Known(va), Valuation::Known(vc)) = (x.valuation(), y.valuation()) {
            let sum = x.add(&y).unwrap().valuation();
            prop_assert!(sum.lower_bound() >= va.min(vc));
            if va != vc {
                prop_assert_eq!(sum, Valuation::Known(va.min(vc)));
            }
        }
    }

    #[test]
    fn valuation_is_multiplicative(p in strategies::small_prime(), b in 2u32..24, a in any::<i32>(), c in any::<i32>()) {
        let x = point(&a.into(), p, b);
        let y = point(&c.into(), p, b);
        if let (Valuation::Known(va), Valuation::Known(vc)) = (x.valuation(), y.valuation()) {
            if va + vc < b {
                prop_assert_eq!(x.mul(&y).unwrap().valuation(), Valuation::Known(va + vc));
            }
        }
    }

    #[test]
    fn division_by_a_unit_inverts_multiplication(p in strategies::small_prime(), b in 1u32..20, a in any::<i64>(), u in any::<i64>()) {
        let x = point(&a.into(), p, b);
        let unit = point(&u.into(), p, b);
        prop_assume!(unit.is_unit());
        prop_assert_eq!(x.mul(&unit).unwrap().div(&unit).unwrap(), x);
    }

    #[test]
    fn division_loses_the_divisor_valuation(p in strategies::small_prime(), b in 1u32..20, q in any::<i32>(), d in any::<i32>()) {
        prop_assume!(d != 0);
        let k = vp(&BigInt::from(d), p).unwrap();
        let num = point(&(BigInt::from(q) * d), p, b);
        let den = point(&d.into(), p, b);
        match num.div(&den) {
            Ok(r) => {
                prop_assert_eq!(r.precision(), b - k);
                prop_assert_eq!(residue(&r), BigInt::from(q).mod_floor(&pow(p, b - k)));
            }
            Err(e) => {
                prop_assert!(k >= b, "{e}");
                prop_assert!(matches!(e, Error::DivisionByAmbiguousZero | Error::PrecisionExhausted(_)));
            }
        }
    }

    #[test]
    fn truncation_then_reembedding_keeps_residues(p in strategies::small_prime(), b in 2u32..20, a in any::<i64>(), t in 1u32..20) {
        let x = point(&a.into(), p, b);
        let t = t.min(b);
        let y = x.truncate(t).unwrap();
        prop_assert_eq!(y.precision(), t);
        prop_assert_eq!(residue(&y), residue(&x).mod_floor(&pow(p, t)));
        prop_assert_eq!(residue(&y.reembed(b).unwrap()), residue(&y));
    }
}
