//! Numerics for arithmetic intersection on the product of two modular
//! curves: real-analytic Eisenstein coefficients and their s-derivatives,
//! Kudla Green-function integrals, boundary-term integrals, Faltings
//! heights, and the verification of the identity
//!
//!   ht(T(m)) + (18/pi^2) I_m(v) = A'(v,1,m),   m != 0,
//!
//! through independent routes (closed forms against quadrature and
//! Monte Carlo oracles).

pub mod arith;
pub mod boundary;
pub mod eisenstein;
pub mod error;
pub mod green;
pub mod identity;
pub mod quad;
pub mod selftest;
pub mod specfun;

pub use error::{Error, Result};
pub use specfun::{Constants, Precision};
