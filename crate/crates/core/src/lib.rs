//! Infinitesimal free probability over the Grassmann (dual-number) algebra.
//!
//! A state on a truncated noncommutative algebra takes values `body + ε·soul`
//! with `ε² = 0`. Free cumulants of such a state are computed by Möbius
//! inversion over non-crossing partitions; their souls are the infinitesimal
//! cumulants, which also arise as Möbius sums over type-B partitions with a
//! zero-block.
//!
//! Module map:
//! - [`grassmann`]: the scalar algebra.
//! - [`nc`]: the type-A lattice of non-crossing partitions.
//! - [`ncb`]: symmetric type-B partitions and the absolute-value fibration.
//! - [`freealg`]: words, polynomials and derivations over a generator alphabet.
//! - [`state`], [`cumulants`], [`freeness`]: states, cumulant transforms and checkers.
//! - [`constructions`]: free products, compressions, named laws, derivations, convolution powers.

pub mod constructions;
pub mod cumulants;
pub mod error;
pub mod freealg;
pub mod freeness;
pub mod grassmann;
pub mod nc;
pub mod ncb;
pub mod state;

pub use error::{Error, Result};
pub use grassmann::Dual;
pub use num_complex::Complex64;

/// Default tolerance for `Dual` equality and identity checks.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Coefficients below this magnitude are dropped from polynomials.
pub const PRUNE_TOL: f64 = 1e-14;
