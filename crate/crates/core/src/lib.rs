//! Kite central configurations of the four-body problem in which three of
//! the masses are equal.
//!
//! Two bodies sit on the symmetry axis at `A = (0, tan α)` and
//! `B = (0, ∓tan β)`, the other two at `(±1, 0)`. For each angle pair the
//! configuration is central for a unique choice of masses, and the
//! equal-mass conditions `μ = μ1` and `μ = μ2` cut out four curve families
//! in the (β, α) plane, which this crate traces and analyses.

pub mod analysis;
pub mod angles;
pub mod cli;
pub mod conditions;
pub mod error;
pub mod export;
pub mod masses;
pub mod oracle;
pub mod solver;

pub use angles::{AnglePair, ConfigKind, Region};
pub use conditions::FamilyId;
pub use error::{KiteError, Result};
pub use masses::MassTriple;
