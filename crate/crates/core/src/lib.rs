//! Symbolic calculator for the unitary dual of `GL(n)` over a quadratic
//! extension of a p-adic field.
//!
//! Representations are canonical multisets of Speh and complementary-series
//! factors over a declared [`Alphabet`] of cuspidal symbols. The
//! [`distinction`] module decides sigma-distinction with proof traces, and
//! [`enumerate`] cross-checks every rule over bounded universes.

pub mod alphabet;
pub mod derivative;
pub mod distinction;
pub mod dsl;
pub mod enumerate;
pub mod error;
pub mod rational;
pub mod segment;
pub mod unitary;

#[cfg(test)]
mod testing;

pub use alphabet::{Alphabet, AlphabetError, CuspidalSymbol, Parity, Rho};
pub use distinction::{Dichotomy, ProofTrace, Rule};
pub use dsl::{DslError, Expr, ExprKind, Position};
pub use enumerate::{CrossCheckReport, UniverseSpec};
pub use error::{Error, Result};
pub use rational::Exponent;
pub use segment::Segment;
pub use unitary::{ComplementaryFactor, Factor, SpehFactor, UnitaryRep};
