//! A laboratory for Boolean function complexity measures.
//!
//! Functions are packed truth tables ([`PartialFn`], [`TruthTable`]); the
//! measures cover sensitivity, block sensitivity, fractional block
//! sensitivity, exact and approximate degree and decision-tree depth. The
//! [`noisy`] module simulates the noisy-oracle query model, and [`verify`]
//! runs the inequality chains and ratio studies exposed by the CLI.
//!
//! Polynomial and LP code is generic over the scalar type; the aliases
//! below fix the precisions used by the rest of the crate.

pub mod adeg;
pub mod bits;
pub mod error;
pub mod func;
pub mod lp;
pub mod measures;
pub mod noisy;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use func::{zoo, FnSpec, JuntaSymmetricSpec, Limits, PartialFn, SymmetricSpectrum, TruthTable};

/// Real multilinear polynomial over `{0,1}^n` in double precision.
pub type Poly = adeg::MultilinearPoly<f64>;
/// Univariate polynomial in double precision.
pub type UPoly = adeg::UnivariatePoly<f64>;
/// Double-precision linear program.
pub type Lp = lp::LinearProgram<f64>;
/// Double-precision LP outcome.
pub type LpResult = lp::LpOutcome<f64>;
/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
