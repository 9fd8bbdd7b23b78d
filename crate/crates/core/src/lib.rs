//! Isolation and certification of the roots in `Z_p` of univariate p-adic polynomials.
//!
//! Elements of `Z_p` are carried at a fixed absolute precision with exact
//! valuation data. Roots are isolated by subdividing `Z_p` into balls guided
//! by the Strassman count, each isolating ball is certified by exact
//! alpha-theory, and condition numbers give the precision a run needs.
//!
//! ```
//! use strassman::{solve, IntPoly, Prime, SolverConfig};
//!
//! let f: IntPoly = "0,2,1".parse().unwrap(); // 2T + T^2
//! let result = solve(&f, Prime::new(2).unwrap(), &SolverConfig::default()).unwrap();
//! let centers: Vec<String> = result.balls().iter().map(|b| b.to_string()).collect();
//! assert_eq!(centers, ["0 + 2^2 Z_2", "2 + 2^2 Z_2"]);
//! ```

pub mod condition;
pub mod counting;
pub mod error;
pub mod exponent;
pub mod lab;
pub mod modp;
pub mod newton_polygon;
pub mod padic;
pub mod poly;
pub mod prime;
pub mod smale;
pub mod solver;

pub use condition::{
    dist_to_singular, kappa_global, kappa_local, required_precision, truncation_safe, KappaValue,
};
pub use counting::{strassman_count, strassman_count_ball, unit_ball_root_count, Ball};
pub use error::{Error, Result};
pub use exponent::Exponent;
pub use padic::{PAdicInt, Valuation};
pub use poly::{IntPoly, PAdicPoly, ParsePolyError};
pub use prime::Prime;
pub use smale::{certify, newton_step, refine, separation, smale_params, SmaleData};
pub use solver::{solve, solve_padic, IsolationResult, SolverConfig};

/// Serde adapter writing a `BigUint` as a decimal string.
pub mod serde_decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}
