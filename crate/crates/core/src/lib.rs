//! Exact census and numerical-integration toolkit for the distribution of
//! discriminants of integer polynomials.
//!
//! The crate is split along the lines of the computation:
//!
//! - [`poly`]: integer and real polynomial primitives (heights, discriminants,
//!   root signatures, root/coefficient conversions).
//! - [`census`]: exhaustive enumeration of integer polynomials of bounded
//!   height with exact counts `N_s(Q, X)`.
//! - [`volume`]: Monte Carlo estimates of the limit density `f_s(δ)`.
//! - [`asymptotic`]: the constant `λ₀` in `f_0(δ) ~ λ₀ δ^{(n+2)/(2n)}` via the
//!   root-space reduction and a Selberg-type integral.
//! - [`harness`]: joins the above into quantitative reports.

pub mod asymptotic;
pub mod census;
pub mod checks;
pub mod ddouble;
pub mod error;
pub mod harness;
pub mod io;
pub mod poly;
pub mod quad;
pub mod rng;
pub mod volume;

pub use error::{Error, Result};
pub use poly::{CoefficientPoint, DiscriminantValue, HeightKind, IntPolynomial, Signature};
