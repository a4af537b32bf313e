use thiserror::Error;

/// Every failure the library can report.
///
/// The `Display` form always starts with the variant name, which the CLI
/// prints verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CantorError {
    #[error("InvalidBasis: {0}")]
    InvalidBasis(String),

    #[error("DigitOutOfRange: digit {digit} at position {index} is not below q = {radix}")]
    DigitOutOfRange { index: u64, digit: u64, radix: u64 },

    #[error("NotQRational: {0}")]
    NotQRational(String),

    #[error("ParseError: {0}")]
    ParseError(String),

    #[error("OutOfUnitInterval: {0} is not in [0, 1]")]
    OutOfUnitInterval(String),

    #[error("OutOfRange: {0}")]
    OutOfRange(String),

    #[error("DegeneratePeriod: the period product equals 1")]
    DegeneratePeriod,

    #[error("BasisNotPeriodic: {0}")]
    BasisNotPeriodic(String),

    #[error("CycleMisaligned: {0}")]
    CycleMisaligned(String),

    #[error("NonCanonicalInput: {0}")]
    NonCanonicalInput(String),

    #[error("BasisDigitTooSmall: q_{index} = {radix} but every q_k must be at least 3")]
    BasisDigitTooSmall { index: u64, radix: u64 },

    #[error("EmptyCycle: a periodic digit cycle needs at least one digit")]
    EmptyCycle,

    #[error("MalformedCertificate: {0}")]
    MalformedCertificate(String),

    #[error("NotExactlyDecodable: {0}")]
    NotExactlyDecodable(String),
}

impl CantorError {
    /// The bare variant name, e.g. `"OutOfUnitInterval"`.
    pub fn name(&self) -> &'static str {
        match self {
            CantorError::InvalidBasis(_) => "InvalidBasis",
            CantorError::DigitOutOfRange { .. } => "DigitOutOfRange",
            CantorError::NotQRational(_) => "NotQRational",
            CantorError::ParseError(_) => "ParseError",
            CantorError::OutOfUnitInterval(_) => "OutOfUnitInterval",
            CantorError::OutOfRange(_) => "OutOfRange",
            CantorError::DegeneratePeriod => "DegeneratePeriod",
            CantorError::BasisNotPeriodic(_) => "BasisNotPeriodic",
            CantorError::CycleMisaligned(_) => "CycleMisaligned",
            CantorError::NonCanonicalInput(_) => "NonCanonicalInput",
            CantorError::BasisDigitTooSmall { .. } => "BasisDigitTooSmall",
            CantorError::EmptyCycle => "EmptyCycle",
            CantorError::MalformedCertificate(_) => "MalformedCertificate",
            CantorError::NotExactlyDecodable(_) => "NotExactlyDecodable",
        }
    }
}

pub type Result<T, E = CantorError> = std::result::Result<T, E>;
