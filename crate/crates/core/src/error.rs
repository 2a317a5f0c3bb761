use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A caller-side precondition was violated.
    #[error("contract violation: {0}")]
    Contract(String),
    /// The residue-tree search went deeper than the configured cap.
    #[error("search depth {depth} exceeded the cap of {cap} (a={a}, b={b}, n={n}, p={p})")]
    DepthExceeded {
        depth: u32,
        cap: u32,
        a: u64,
        b: u64,
        n: String,
        p: u64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}
