use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid interval [{a}, {b}]: left endpoint must be smaller than right endpoint")]
    InvalidInterval { a: u64, b: u64 },

    /// `i * beta + 1 = 0` for a boundary point `i`.
    #[error("pole hit: beta = -1/{index} makes the factor 1/({index}*beta + 1) singular")]
    PoleHit { index: u64 },

    #[error("{q} is not a boundary point of the subset")]
    NotBoundary { q: u64 },

    #[error("reflection window [{q} - {d}, {q} + {d}] leaves the nonnegative axis")]
    Window { q: u64, d: u64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("divergent: {0}")]
    Divergence(String),

    #[error("truncation tolerance unreachable: {0}")]
    Truncation(String),

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
