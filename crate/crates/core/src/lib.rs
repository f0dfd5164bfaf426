//! Numerics for the k-free Dirichlet series `ζ(s)/ζ(ks) = Σ μ^(k)(n)/n^s`.
//!
//! The crate computes the Laurent coefficients `γ^{M,k}_n` of the series at
//! its pole `s = 1` along three independent routes:
//!
//! * sum side: log-limit sums and Stieltjes remainder integrals over a sieved
//!   k-free indicator ([`limits`], fed by [`sieve`] and [`counting`]);
//! * analytic side: extended-precision Euler–Maclaurin evaluation of `ζ`
//!   ([`zetacore`]) combined with Cauchy contour extraction or power-series
//!   products ([`laurent`]);
//! * continuation: finite-sum-plus-counterterm forms valid for
//!   `ℜ(s) > 1/(2k)` and the `ζ(1/k)` limit formulas ([`continuation`]).
//!
//! The [`cli`] module backs the `kfree` binary.

pub mod cli;
pub mod contour;
pub mod continuation;
pub mod counting;
pub mod error;
pub mod laurent;
pub mod limits;
pub mod sieve;
pub mod sum;
pub mod zetacore;

pub use counting::{Census, Convention, CountingCheckpoint};
pub use error::{Error, Result};
pub use laurent::{LaurentExpansion, Method};
pub use sieve::{IndicatorBlock, MobiusBlock, SieveConfig};
pub use zetacore::{ComplexX, RealX};
