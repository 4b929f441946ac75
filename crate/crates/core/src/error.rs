use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the engine reports.
///
/// Variants split into input/validation problems and computation problems;
/// [`Error::is_validation`] is what the command line uses to pick an exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown curve `{0}`")]
    UnknownCurve(String),

    #[error("unknown basis label `{0}`")]
    UnknownBasisLabel(String),

    #[error("unknown singularity `{0}`")]
    UnknownSingularity(String),

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("degenerate curve configuration: {0:?}")]
    DegenerateConfiguration(Vec<String>),

    #[error("curves {0:?} do not have a negative definite intersection matrix")]
    NotNegativeDefinite(Vec<String>),

    #[error("only chain contractions supported: {0}")]
    NonChainContraction(String),

    #[error(
        "general weighted blow-ups out of scope: singularity `{label}` has type 1/{r}({one},{a})",
        one = 1
    )]
    UnsupportedWeightedBlowUp { label: String, r: u64, a: u64 },

    #[error("invalid Hirzebruch-Jung data: {0}")]
    InvalidContinuedFraction(String),

    #[error("invalid point `{label}`: {reason}")]
    InvalidPoint { label: String, reason: String },

    #[error("invalid flag point `{label}`: {reason}")]
    InvalidFlagPoint { label: String, reason: String },

    #[error("empty recipe")]
    EmptyRecipe,

    #[error("invalid recipe step {index}: {reason}")]
    InvalidStep { index: usize, reason: String },

    #[error("cannot parse rational `{0}`")]
    RationalParse(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown catalog configuration `{0}`")]
    UnknownConfig(String),

    #[error("unknown flag `{0}`")]
    UnknownFlag(String),

    #[error("missing generic point on flag `{0}`")]
    MissingGenericPoint(String),

    #[error("{0} outside the domain of the piecewise function")]
    OutOfDomain(String),

    #[error("not pseudoeffective over tracked cone")]
    NotPseudoeffective,

    #[error("pseudoeffective data incomplete: {0}")]
    PseudoeffectiveDataIncomplete(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for malformed input, false for failures that happen while computing.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::NotPseudoeffective
                | Error::PseudoeffectiveDataIncomplete(_)
                | Error::OutOfDomain(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
