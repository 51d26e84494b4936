//! Exact arithmetic for the super telescoping identity
//!
//! ```text
//!   sum_{S : |S| = n}  prod_{i in dS} 1/(i*beta + 1)  =  binom(1/beta + n - 1, n)
//! ```
//!
//! where `S` ranges over finite unions of closed intervals with nonnegative
//! integer endpoints, together with the machinery around it:
//!
//! - [`subsets`]: canonical integer subsets, their boundary statistics and
//!   the bounded families `A_{n,M}`.
//! - [`telescoping`]: weights, truncated sums, the binomial right-hand side,
//!   generating-function coefficients and convergence reports.
//! - [`cancellation`]: partial-fraction residues `C_q(S)`, d-reflections,
//!   minimum symmetric gaps and exact residue cancellation.
//! - [`lattice`]: the one-dimensional binary lattice gas with couplings
//!   `J_i(beta) = -ln(1 + i beta)/beta`, its prime-species vector version
//!   (partition function `zeta(beta)^(1/beta)`), and samplers.
//! - [`verblunsky`]: free-field coefficients, Verblunsky sequences, the
//!   Szego recursion, loop-group products and the exact moment oracles that
//!   make the identity a variance identity.
//!
//! The crate is `no_std` and needs only `alloc`. Floating-point special
//! functions come from `libm`.
#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` style guards are meant to reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod cancellation;
pub mod error;
pub mod lattice;
pub mod rational;
pub mod subsets;
pub mod telescoping;
pub mod verblunsky;

pub use error::{Error, Result};
pub use rational::Rational;
pub use subsets::{IntegerSubset, Interval, PointClass};
pub use telescoping::Beta;
