use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{what} needs size {needed}, above the limit {limit} (raise --max-order or SINGER_GQ_MAX_ORDER)")]
    Guard { what: String, needed: u64, limit: u64 },
    #[error("{0}")]
    Compute(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) | CliError::Compute(_) => 1,
            CliError::Guard { .. } => 3,
        }
    }
}

/// Library errors surface as computation failures with their message.
pub fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

pub fn guard(what: impl Into<String>, needed: u64, limit: u64) -> Result<(), CliError> {
    if needed > limit {
        return Err(CliError::Guard {
            what: what.into(),
            needed,
            limit,
        });
    }
    Ok(())
}
