//! Exact infinite-product expansions of analytic functions and certified
//! high-precision evaluation of prime Euler products `∏_p f(1/p)`.
//!
//! The pipeline: expand `f` into a truncated rational Taylor series
//! ([`funcs::taylor`]), pass to the logarithmic-derivative coefficients
//! ([`qseries::log_deriv_series`]), solve the divisor-sum recursion for the
//! product exponents of `f(z) = ∏ (1 + ε_n z^n)^{α_n}`
//! ([`expand::product_exponents`]), and evaluate the rapidly convergent
//! partial-zeta tail product with a certified truncation bound
//! ([`evaluate::evaluate_constant`]).
//!
//! The exact-arithmetic side (everything except [`mpreal`] and
//! [`evaluate`]) never rounds: coefficients, exponents and planner bounds
//! are arbitrary-precision rationals throughout.

pub mod arith;
pub mod congruence;
pub mod evaluate;
pub mod expand;
pub mod funcs;
pub mod mpreal;
pub mod qseries;

pub use rug::{Integer, Rational};
