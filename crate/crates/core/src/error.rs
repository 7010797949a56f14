use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group specification: {0}")]
    InvalidGroupSpec(String),
    #[error("group of order {order} exceeds the configured bound {bound}")]
    GroupTooLarge { order: u128, bound: u128 },
    #[error("subgroup S{0} is not contained in S{1}")]
    NotASubgroup(usize, usize),
    #[error("unknown subgroup id `{0}`")]
    UnknownSubgroup(String),
    #[error("unknown character `{0}`")]
    UnknownCharacter(String),

    #[error("set of subgroups is not downward closed: S{member} is present but S{missing} is not")]
    NotDownwardClosed { member: usize, missing: usize },
    #[error("S{0} is not in the finite domain of the type function")]
    SNotInFiniteDomain(usize),
    #[error("function is not admissible: violated at (S{0}, S{1})")]
    NotAdmissible(usize, usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("function is not total: expected {expected} values, got {got}")]
    NotTotal { expected: usize, got: usize },
    #[error("type functions cannot take the value -1 (at S{0})")]
    NegativeType(usize),

    #[error("negative power of a non-unit")]
    NegativePowerOfNonUnit,
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("series has a non-invertible linear term")]
    NonunitLinearTerm,
    #[error("element is not topologically nilpotent")]
    NotTopologicallyNilpotent,
    #[error("missing generator `{0}`")]
    MissingGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` has odd degree")]
    OddDegree(String),
    #[error("coefficient {0} is not p-local")]
    NotPLocal(String),
    #[error("unsupported ring kind: {0}")]
    UnsupportedRingKind(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("set-to-zero relations must be monomials")]
    NonMonomialRelation,

    #[error("logarithm must have the form x + O(x^2)")]
    BadLogLinearTerm,
    #[error("self-test of the {0} convention failed: {1}")]
    ConventionSelfTestFailed(String, String),
    #[error("p-series congruence fails: {0}")]
    CongruenceFails(String),
    #[error("formal group law is not defined over a prime field")]
    NotOverPrimeField,
    #[error("precision too low: {0}")]
    PrecisionTooLow(String),
    #[error("no certificate found for relation {0}")]
    CertificateNotFound(String),
    #[error("malformed series: {0}")]
    MalformedSeries(String),

    #[error("parse error: {0}")]
    Parse(String),
    #[error("cannot read {0}")]
    Io(String),
    #[error("schema violation at {pointer}: {message}")]
    SchemaViolation { pointer: String, message: String },
}

impl Error {
    pub fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::SchemaViolation {
            pointer: pointer.into(),
            message: message.into(),
        }
    }

    /// Short machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGroupSpec(_) => "InvalidGroupSpec",
            Error::GroupTooLarge { .. } => "GroupTooLarge",
            Error::NotASubgroup(..) => "NotASubgroup",
            Error::UnknownSubgroup(_) => "UnknownSubgroup",
            Error::UnknownCharacter(_) => "UnknownCharacter",
            Error::NotDownwardClosed { .. } => "NotDownwardClosed",
            Error::SNotInFiniteDomain(_) => "SNotInFiniteDomain",
            Error::NotAdmissible(..) => "NotAdmissible",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::TooLarge(_) => "TooLarge",
            Error::NotTotal { .. } => "NotTotal",
            Error::NegativeType(_) => "NegativeType",
            Error::NegativePowerOfNonUnit => "NegativePowerOfNonUnit",
            Error::NonzeroConstantTerm => "NonzeroConstantTerm",
            Error::NonunitLinearTerm => "NonunitLinearTerm",
            Error::NotTopologicallyNilpotent => "NotTopologicallyNilpotent",
            Error::MissingGenerator(_) => "MissingGenerator",
            Error::DuplicateGenerator(_) => "DuplicateGenerator",
            Error::OddDegree(_) => "OddDegree",
            Error::NotPLocal(_) => "NotPLocal",
            Error::UnsupportedRingKind(_) => "UnsupportedRingKind",
            Error::RingMismatch(_) => "RingMismatch",
            Error::NonMonomialRelation => "NonMonomialRelation",
            Error::BadLogLinearTerm => "BadLogLinearTerm",
            Error::ConventionSelfTestFailed(..) => "ConventionSelfTestFailed",
            Error::CongruenceFails(_) => "CongruenceFails",
            Error::NotOverPrimeField => "NotOverPrimeField",
            Error::PrecisionTooLow(_) => "PrecisionTooLow",
            Error::CertificateNotFound(_) => "CertificateNotFound",
            Error::MalformedSeries(_) => "MalformedSeries",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
            Error::SchemaViolation { .. } => "SchemaViolation",
        }
    }
}
