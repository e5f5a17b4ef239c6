use thiserror::Error;

/// Error taxonomy shared by every module. The CLI maps these onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    /// An in-/out-degree demand orientation is infeasible; `cut` is a vertex
    /// set whose total demand exceeds the edges able to serve it.
    #[error("precondition unmet: degree demand infeasible, violating cut {cut:?}")]
    DemandInfeasible { cut: Vec<usize> },
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// A construction that a verified hypothesis guarantees to succeed did
    /// not. Audits persist these as findings instead of dropping them.
    #[error("contract violation: {0}")]
    ContractViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Enumeration limits for the exhaustive checkers. Knobs, not constants.
#[derive(Clone, Debug)]
pub struct Caps {
    /// Max vertex count for full partition enumeration (Bell-number cost).
    pub partition_vertices: usize,
    /// Max vertex count for full bipartition enumeration (2^(n-1) cost).
    pub bipartition_vertices: usize,
    /// Max vertex count for disjoint-pair enumeration (3^n cost).
    pub lovasz_vertices: usize,
    /// Hard cap on |E| for the 2^|E| brute-force oracle.
    pub brute_force_edges: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            partition_vertices: 12,
            bipartition_vertices: 16,
            lovasz_vertices: 12,
            brute_force_edges: 20,
        }
    }
}
