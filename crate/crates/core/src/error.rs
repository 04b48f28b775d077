use thiserror::Error;

/// Errors raised by the algorithms in this crate.
///
/// Verification routines never return these for a failed check; they return
/// a dedicated violation value instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("parallel edge {0}-{1}")]
    ParallelEdge(usize, usize),

    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency error: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
