//! Grassmann-Berezin calculus, fermionic Clifford star products and
//! pseudoclassical spin dynamics.

pub mod berezin;
pub mod error;
pub mod format;
pub mod moyal;
pub mod multivector;
pub mod path_integral;
pub mod sampling;
pub mod signature;
pub mod spin;
pub mod star;
pub mod verify;

pub use error::{Error, Result};
pub use multivector::Multivector;
pub use signature::Signature;

/// Largest number of generators a signature may carry.
pub const MAX_GENERATORS: usize = 24;
/// Coefficients below this magnitude are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-14;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
