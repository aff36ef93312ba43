use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Shapes, widths or parameters that do not fit together.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// An enumeration would exceed its configured budget. Raised before any
    /// work is done.
    #[error("capacity exceeded: {what} requires {required}, budget is {budget}")]
    Capacity {
        what: String,
        required: u128,
        budget: u128,
    },
    /// A protocol broke the execution model (wrong message length, messages
    /// between non-adjacent vertices, inconsistent decisions).
    #[error("protocol fault: {0}")]
    ProtocolFault(String),
    /// A construction produced an object that failed its own post-checks.
    #[error("construction failure: {0}")]
    Construction(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn fault(msg: impl Into<String>) -> Self {
        Error::ProtocolFault(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

/// Fails with [`Error::Capacity`] when `required > budget`.
pub(crate) fn ensure_budget(what: &str, required: u128, budget: u128) -> Result<()> {
    if required > budget {
        return Err(Error::Capacity {
            what: what.to_string(),
            required,
            budget,
        });
    }
    Ok(())
}

/// `base^exp`, saturating at `u128::MAX`.
pub(crate) fn sat_pow(base: u128, exp: u32) -> u128 {
    base.checked_pow(exp).unwrap_or(u128::MAX)
}
