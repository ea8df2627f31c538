use alloc::string::String;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty network")]
    EmptyNetwork,
    #[error("duplicate cheque id `{0}`")]
    DuplicateCheque(String),
    #[error("cheque `{0}` has non-positive value")]
    NonPositiveValue(String),
    #[error("cheque `{cheque}` is issued by `{customer}` to itself")]
    SelfCheque { cheque: String, customer: String },
    #[error("duplicate customer `{0}`")]
    DuplicateCustomer(String),
    #[error("duplicate edge `{from}` -> `{to}`")]
    DuplicateEdge { from: String, to: String },
    #[error("unknown customer `{0}`")]
    UnknownCustomer(String),
    #[error("customer `{0}` receives cheques but is not marked funded")]
    UnfundedRecipient(String),
    #[error("total value overflows 64-bit cents")]
    ValueOverflow,
    #[error("failure fraction must be in (0, 10000] basis points, got {0}")]
    InvalidFailureFraction(u32),
    #[error("seed count {requested} out of range 1..={available}")]
    SeedCountOutOfRange { requested: usize, available: usize },
    #[error("recursion depth must be at least 1")]
    InvalidDepth,
    #[error("customer `{0}` has no incoming cheques; composite loss is undefined")]
    NoIncomingCheques(String),
    #[error("{requested} power-law samples available, at least {required} required")]
    InsufficientSamples { requested: usize, required: usize },
    #[error("probability for `{customer}` must lie in [0, 1], got {p}")]
    InvalidProbability { customer: String, p: f64 },
    #[error("no failure probability given for candidate `{0}`")]
    MissingProbability(String),
    #[error("scenario member `{0}` is outside the universe")]
    OutsideUniverse(String),
    #[error(
        "exact enumeration over {candidates} candidates exceeds the limit of {limit}; use monte-carlo mode"
    )]
    EnumerationTooLarge { candidates: usize, limit: usize },
    #[error("monte-carlo mode requires at least one draw")]
    NoDraws,
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParams(String),
}

impl Error {
    /// Errors that describe a valid request whose computation cannot be carried out.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::EnumerationTooLarge { .. } | Error::InfeasibleParams(_)
        )
    }
}
