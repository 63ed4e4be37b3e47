use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{op}: {source}")]
    Numeric {
        op: String,
        #[source]
        source: qsl_core::Error,
    },
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0} propert{} failed", if *.0 == 1 { "y" } else { "ies" })]
    ValidationFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric { .. } | CliError::Io { .. } => 3,
            CliError::ValidationFailed(_) => 1,
        }
    }

    pub fn numeric(op: impl Into<String>) -> impl FnOnce(qsl_core::Error) -> CliError {
        let op = op.into();
        move |source| CliError::Numeric { op, source }
    }
}
