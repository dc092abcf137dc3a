use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Error type shared by every module. The CLI maps variants onto the stable
/// exit-code contract: 2 validation, 3 resource budget, 4 numeric failure.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("range overflow: {0}")]
    Range(String),

    /// Raised when a pretentious-distance sum goes negative (values outside
    /// the unit disk); carries the raw squared sum for diagnostics.
    #[error("domain error: {message} (raw sum = {raw})")]
    Domain { message: String, raw: f64 },

    #[error("memory budget exceeded: {required} bytes required, {budget} bytes allowed")]
    Resource { required: u64, budget: u64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for scripting: 0 is success, 2 validation failure,
    /// 3 resource budget, 4 numeric non-convergence, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Parse { .. } | Error::Range(_) | Error::Domain { .. } => 2,
            Error::Resource { .. } => 3,
            Error::Numeric(_) => 4,
            Error::Io(_) => 1,
        }
    }

    /// Convenience constructor for input-validation failures.
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_stable() {
        assert_eq!(Error::input("x").exit_code(), 2);
        assert_eq!(
            Error::Parse {
                line: 1,
                column: 2,
                message: "bad".into()
            }
            .exit_code(),
            2
        );
        assert_eq!(Error::Range("overflow".into()).exit_code(), 2);
        assert_eq!(
            Error::Resource {
                required: 10,
                budget: 1
            }
            .exit_code(),
            3
        );
        assert_eq!(Error::Numeric("divergence".into()).exit_code(), 4);
    }
}
