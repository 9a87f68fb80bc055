//! Euler's criterion of prime order l.
//!
//! Jacobi sums J(i, j) of order l over F_p, their normalization in Z[ζ_l],
//! l-th power residue symbols computed modulo a rational integer D, and the
//! resulting classification of D by its index class mod l. Every decision
//! path is paired with a direct mod-p oracle.

pub mod cli;
pub mod criterion;
pub mod cyclotomic;
pub mod error;
pub mod jacobi;
pub mod modp;
pub mod oracle;
pub mod poly;
pub mod symbol;

pub use cyclotomic::{CycInt, Jet, UnitTrail};
pub use error::{Error, Result};
pub use modp::PrimeContext;

/// Seed used for equal-degree factorization when none is supplied.
pub const DEFAULT_SEED: u64 = 0x5eed_c1c1_0000_0001;
