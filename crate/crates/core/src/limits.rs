use serde::{Deserialize, Serialize};

/// Hard caps on the brute-force enumerations. Every enumeration checks its
/// size up front and fails with [`crate::Error::CapExceeded`] instead of
/// truncating.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Longest operation table, `k^n`.
    pub max_table_len: u64,
    /// Number of operation tables `pol` may enumerate.
    pub max_operations: u64,
    /// Number of matrices a generated collection or matrix space may hold.
    pub max_matrices: u64,
    /// Candidate matrices times Skolem assignments in one minor computation.
    pub max_assignments: u64,
    /// Candidate collections an audit pool may enumerate.
    pub max_pool: u64,
    /// Member tuples the conjunctive-minor audit may evaluate.
    pub max_tuples: u64,
    /// Terms `enumerate_terms` may produce.
    pub max_terms: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_table_len: 1 << 20,
            max_operations: 1 << 20,
            max_matrices: 1 << 20,
            max_assignments: 1 << 26,
            max_pool: 1 << 22,
            max_tuples: 1 << 24,
            max_terms: 1 << 20,
        }
    }
}
