use thiserror::Error;

/// Errors raised by the library. Searches that hit a size cap or a node
/// budget fail with a dedicated variant rather than returning a partial answer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: u64, n: usize },

    #[error("repeated vertex {vertex} in triple")]
    RepeatedVertex { vertex: u32 },

    #[error("{what}: {n} vertices exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },

    #[error("{what}: search budget of {budget} exhausted")]
    BudgetExceeded { what: &'static str, budget: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("set is not collapsible: {0}")]
    NotCollapsible(String),

    #[error("not a partition of the vertex set: {0}")]
    NotPartition(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::CapExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
