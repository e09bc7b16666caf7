use thiserror::Error;

/// Errors raised by the shearlet toolkit.
#[derive(Debug, Error)]
pub enum ShearletError {
    /// An argument violated an operation's precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("shape mismatch: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("grid {rows}x{cols} is too small for {scales} scale(s): need at least {min}x{min}")]
    GridTooSmall {
        rows: usize,
        cols: usize,
        scales: usize,
        min: usize,
    },

    /// The dual-frame weights vanish at some frequency, so the system is not invertible.
    #[error("degenerate frame: dual-frame weight {value:e} at frequency bin ({row}, {col})")]
    FrameDegenerate { row: usize, col: usize, value: f64 },

    /// Coefficients were produced by a different shearlet system.
    #[error("coefficients belong to system {found:016x}, not {expected:016x}")]
    SystemMismatch { expected: u64, found: u64 },

    #[error("step sizes sigma={sigma}, tau={tau} violate sigma*tau*|T|^2 < 1 (|T| = {op_norm})")]
    StepSize { sigma: f64, tau: f64, op_norm: f64 },

    /// Malformed or truncated file content.
    #[error("format error at byte {offset}: {message}")]
    Format { offset: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ShearletError {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        ShearletError::Argument(msg.into())
    }

    pub(crate) fn format(offset: u64, msg: impl Into<String>) -> Self {
        ShearletError::Format {
            offset,
            message: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, ShearletError>;
