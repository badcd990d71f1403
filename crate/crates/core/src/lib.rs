//! Explicit exponents and constants for Vinogradov's mean value integral,
//! the exponential sums `S(N, t)`, and upper bounds for `zeta(s)` near the
//! line `Re s = 1`.
//!
//! Each module evaluates one layer of the argument; [`oracle`] brute-forces
//! the underlying counting problems at small sizes.

pub mod bound;
pub mod complete;
pub mod error;
pub mod exec;
pub mod incomplete;
pub mod large;
pub mod nt;
pub mod oracle;
pub mod small;
pub mod verify;
pub mod zeta;

pub use bound::PowerBound;
pub use error::{Error, Result};
pub use exec::Execution;
