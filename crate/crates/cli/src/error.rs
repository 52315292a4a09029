use qwalk::cqed::CqedError;
use qwalk::phases::PhaseError;
use qwalk::spectral::SpectralError;
use qwalk::walk::WalkError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: unknown keys, malformed values, parameters out of range.
    #[error("invalid configuration: {0}")]
    Validation(String),
    /// The computation itself failed (gap closure, lost normalization, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn is_validation(&self) -> bool {
        matches!(self, CliError::Validation(_))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Sorts library errors into validation and numerical failures, prefixing
/// `context` (usually the parameter point being evaluated).
pub trait Classify {
    fn classify(self, context: &str) -> CliError;
}

fn validation(context: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{context}: {e}"))
}

fn numerical(context: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(format!("{context}: {e}"))
}

impl Classify for WalkError {
    fn classify(self, context: &str) -> CliError {
        match self {
            WalkError::NotNormalized { .. } => numerical(context, self),
            _ => validation(context, self),
        }
    }
}

impl Classify for SpectralError {
    fn classify(self, context: &str) -> CliError {
        match self {
            SpectralError::GridTooCoarse { .. } => validation(context, self),
            _ => numerical(context, self),
        }
    }
}

impl Classify for PhaseError {
    fn classify(self, context: &str) -> CliError {
        match self {
            PhaseError::Walk(e) => e.classify(context),
            PhaseError::Spectral(e) => e.classify(context),
            PhaseError::ParityMismatch { .. } => validation(context, self),
            PhaseError::Gapless { .. } => numerical(context, self),
        }
    }
}

impl Classify for CqedError {
    fn classify(self, context: &str) -> CliError {
        match self {
            CqedError::Walk(e) => e.classify(context),
            CqedError::CutoffTooSmall { .. } | CqedError::InvalidConfig(_) | CqedError::GridTooSmall(_) => {
                validation(context, self)
            }
            _ => numerical(context, self),
        }
    }
}
