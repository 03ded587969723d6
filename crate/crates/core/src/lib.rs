//! Smooth values of integer polynomials.
//!
//! Counting n <= x with f(n) free of primes above y, the root counts ω_f behind the sieve,
//! the Dickman function, closed-form upper-bound coefficients, the exact V/W sums bounding
//! Ψ_f(x, y) − Ψ_f(z, y), and two applications: primitive prime ideals in real quadratic
//! fields and primitive divisors of n² + b.

pub mod acceptance;
pub mod bounds;
pub mod dickman;
pub mod error;
pub mod modroots;
pub mod oracle;
pub mod polyarith;
pub mod primdiv;
pub mod primes;
pub mod quadfield;
pub mod smoothsieve;
pub mod vwmachinery;

pub use error::{Error, Result};
pub use polyarith::{build_factored, parse_factors, parse_poly, FactoredPoly, IntPoly};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
