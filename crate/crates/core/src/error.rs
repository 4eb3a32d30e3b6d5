use thiserror::Error;

/// Errors reported by the library.
///
/// The variant name is part of the contract: the CLI prints it verbatim as the
/// first token of every diagnostic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("EmptyPeriod: the periodic part of a sequence must be nonempty")]
    EmptyPeriod,

    #[error("EntryOutOfRange: entry {0} exceeds the supported magnitude 2^61")]
    EntryOutOfRange(i128),

    #[error("NotDistinct: cyclic order requires three pairwise distinct addresses")]
    NotDistinct,

    #[error("PeriodicBase: base address {0} is purely periodic")]
    PeriodicBase(String),

    #[error("IsStopCase: the triod has pairwise distinct first symbols")]
    IsStopCase,

    #[error("InvalidTriod: {0}")]
    InvalidTriod(String),

    #[error("NotFormalPoint: itinerary {0} has a forward shift equal to the kneading sequence")]
    NotFormalPoint(String),

    #[error("RealizationBoundExceeded: no address realizes {itinerary} within m_max={m_max} and 2^{log2_cap} candidates")]
    RealizationBoundExceeded {
        itinerary: String,
        m_max: usize,
        log2_cap: u32,
    },

    #[error("NotPeriodic: itinerary {0} is not purely periodic")]
    NotPeriodic(String),

    #[error("EmptyRange: pre-singular realization needs a nonempty range of boundary indices")]
    EmptyRange,

    #[error("GapAssignmentFailure: {0}")]
    GapAssignmentFailure(String),

    #[error("ClosureViolation: {0}")]
    ClosureViolation(String),

    #[error("NotATree: {0}")]
    NotATree(String),

    #[error("NotExpansive: vertices {0} and {1} share an itinerary")]
    NotExpansive(usize, usize),

    #[error("ConvergenceFailure: {0}")]
    ConvergenceFailure(String),

    #[error("ParseError at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("InvariantViolation: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// The bare variant name, e.g. `PeriodicBase`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptyPeriod => "EmptyPeriod",
            Error::EntryOutOfRange(_) => "EntryOutOfRange",
            Error::NotDistinct => "NotDistinct",
            Error::PeriodicBase(_) => "PeriodicBase",
            Error::IsStopCase => "IsStopCase",
            Error::InvalidTriod(_) => "InvalidTriod",
            Error::NotFormalPoint(_) => "NotFormalPoint",
            Error::RealizationBoundExceeded { .. } => "RealizationBoundExceeded",
            Error::NotPeriodic(_) => "NotPeriodic",
            Error::EmptyRange => "EmptyRange",
            Error::GapAssignmentFailure(_) => "GapAssignmentFailure",
            Error::ClosureViolation(_) => "ClosureViolation",
            Error::NotATree(_) => "NotATree",
            Error::NotExpansive(..) => "NotExpansive",
            Error::ConvergenceFailure(_) => "ConvergenceFailure",
            Error::Parse { .. } => "ParseError",
            Error::InvariantViolation(_) => "InvariantViolation",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
