use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },

    #[error("qubit index {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("{n} qubits exceeds the limit of {cap} for this operation")]
    TooManyQubits { n: usize, cap: usize },

    #[error("parse error{}: {message}", line.map(|l| format!(" on line {l}")).unwrap_or_default())]
    Parse {
        line: Option<usize>,
        message: String,
    },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid generators: {0}")]
    InvalidGenerators(String),

    #[error("unknown observable `{0}`")]
    UnknownObservable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(message: impl Into<String>) -> Self {
        Error::Parse {
            line: None,
            message: message.into(),
        }
    }

    /// Attaches a 1-based line number to a parse error that lacks one.
    pub(crate) fn at_line(self, line: usize) -> Self {
        match self {
            Error::Parse {
                line: None,
                message,
            } => Error::Parse {
                line: Some(line),
                message,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_same_n(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::QubitMismatch { left, right })
    }
}
