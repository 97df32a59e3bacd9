//! Finite Dirichlet series that vanish at the initial nontrivial zeros of the
//! Riemann zeta function: multiprecision solver for their coefficients,
//! Newton zero hunting, formal Dirichlet division, and analysis of the
//! sieve-of-Eratosthenes fine structure the coefficients exhibit.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod numerics;
pub mod series;
pub mod solver;
pub mod zeros;

pub use error::{Error, ErrorCategory, Result};
pub use numerics::{agreement_digits, pow_int_neg_s, BigComplex, BigReal, PrecisionContext};
