//! Exact-rational laboratory for level sets of the Takagi function.
//!
//! Every value computed here is an exact [`BigRational`]: Takagi values,
//! singular-function values, measure masses and interval endpoints. Floats
//! are never used on a verification path.

pub mod dimension;
pub mod error;
pub mod expansion;
pub mod interval;
pub mod level;
pub mod measure;
pub mod omega;
pub mod takagi;
pub mod walk;

pub use error::{Error, Result};
pub use expansion::{fmt_rational, parse_rational, BinaryExpansion, DigitProfile, Tail};
pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
pub use takagi::{tau, tau_bounds, tau_dyadic, verify_functional_equations, TauBounds};
