use thiserror::Error;

pub type Result<T> = std::result::Result<T, SwarmError>;

#[derive(Debug, Error)]
pub enum SwarmError {
    /// A configuration invariant is violated.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A time step exceeds the explicit stability bound of an operator.
    #[error("time step {dt:e} exceeds stability bound {bound:e} for {operator}")]
    Unstable {
        operator: &'static str,
        dt: f64,
        bound: f64,
    },

    /// Density fell below the positivity tolerance after a step.
    #[error("negative {field} density {value:e} in cell {cell} at t={t}")]
    SchemeViolation {
        field: String,
        cell: usize,
        value: f64,
        t: f64,
    },

    #[error("operation not available: {0}")]
    Unsupported(String),

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("unknown config key `{0}`")]
    UnknownKey(String),

    #[error("refusing to overwrite {0} (use --force)")]
    WouldOverwrite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl SwarmError {
    /// Short machine-readable category used in CLI error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            SwarmError::InvalidConfig(_) => "invalid-config",
            SwarmError::Unstable { .. } => "unstable",
            SwarmError::SchemeViolation { .. } => "scheme-violation",
            SwarmError::Unsupported(_) => "unsupported",
            SwarmError::Parse(_) => "parse",
            SwarmError::UnknownKey(_) => "unknown-key",
            SwarmError::WouldOverwrite(_) => "would-overwrite",
            SwarmError::Io(_) => "io",
        }
    }
}
