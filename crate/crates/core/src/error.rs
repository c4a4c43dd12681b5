use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{what} needs {requested} vertices, above the cap of {cap}; use the implicit neighbor oracle instead")]
    Capacity {
        what: String,
        requested: u128,
        cap: u128,
    },

    #[error("invalid vertex id {id} (graph has {count} vertices)")]
    InvalidVertex { id: usize, count: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_cap(what: &str, requested: u128, cap: u128) -> Result<()> {
    if requested > cap {
        Err(Error::Capacity {
            what: what.to_string(),
            requested,
            cap,
        })
    } else {
        Ok(())
    }
}
