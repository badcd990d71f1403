//! Exact brute-force counts for tiny instances of the Diophantine systems
//! behind the mean value bounds.
//!
//! Nothing here is asymptotic: every function enumerates, and every count is
//! obtained by two independent routes that must agree before a result is
//! returned.

pub mod congruence;
pub mod count;
pub mod det;

pub use congruence::{
    congruence_count_check, diagonal, standard_systems, univariate, CongruenceReport, MultiPoly,
};
pub use count::{
    brute_j, bounds_chain_report, target_distribution, verify_bounds_chain, zrd_check,
    ChainReport, InequalityCheck, SystemSpec, ZrdReport,
};
pub use det::{det_identity_check, DetReport, PolySystem};

use crate::exec::Execution;

/// Enumeration limits. These are configuration, not constants of the
/// mathematics; raise them if you are prepared to wait.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    /// Maximum number of ordered `s`-tuples drawn from the variable set.
    pub tuples: u128,
    /// Maximum number of `2s`-tuples the direct route may visit.
    pub pairs: u128,
    /// Maximum number of residue vectors scanned by the congruence counter.
    pub residues: u128,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            tuples: 10_000_000,
            pairs: 200_000_000,
            residues: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OracleConfig {
    pub guards: Guards,
    pub exec: Execution,
}

impl OracleConfig {
    pub fn sequential() -> Self {
        OracleConfig {
            exec: Execution::Sequential,
            ..Default::default()
        }
    }
}
