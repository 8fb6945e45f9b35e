//! Exact tests of random utility rationalizability on finitely many linear
//! budgets.
//!
//! Budgets are cut into patches by the other budget hyperplanes
//! ([`geometry`]). A stochastic demand system assigns probabilities to
//! patches, and it is generated by a random utility model iff `Ξπ >= 1`,
//! where row `J` of `Ξ` flags the patches undominated within the subfamily
//! of budgets `J` ([`xi`]). The smallest entry of `Ξπ` (capped at one) is the
//! largest population share that SARP-consistent types can carry
//! ([`analysis`]). All arithmetic is exact ([`rational`], [`lp`]).

pub mod analysis;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod lp;
pub mod problem;
pub mod rational;
pub mod report;
pub mod revealed;
pub mod xi;

pub use error::{Error, Result};
pub use rational::Rational;
