use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("node id out of range: {id} (n = {n})")]
    NodeOutOfRange { id: usize, n: usize },
    #[error("contract misuse: {0}")]
    ContractMisuse(String),
    #[error("source and sink must differ (both {0})")]
    SameTerminals(usize),
    #[error("graph has no node capacities")]
    MissingNodeCaps,
    #[error("flow integrity: {0}")]
    Integrity(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}
