//! High-precision evaluation and verification of a family of logarithmic
//! integrals, central-binomial series, and Euler-BBP sums against their
//! closed forms in pi, log, Gamma, psi, psi', Catalan's G, Cl2, and Li2.
//!
//! The crate evaluates the left-hand side of each identity (by
//! double-exponential quadrature or series acceleration) and the right-hand
//! side (closed-form expressions over special functions) independently, then
//! certifies digit-level agreement. The shipped identity registry is a plain
//! text file; see [`verification`].

pub mod closed_forms;
pub mod error;
pub mod expr;
pub mod numeric;
pub mod quadrature;
pub mod series;
pub mod special;
pub mod verification;

pub use error::{Error, Result};
pub use rug::{Integer, Rational};
pub use numeric::{approx_equal, fundamental_constant, BigReal, ConstantName, Precision};
