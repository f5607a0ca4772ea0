use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("{value} is not a unit modulo {modulus}")]
    NonUnit { value: u64, modulus: u64 },
    #[error("precision violation: {0}")]
    PrecisionViolation(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("series is not group-like: {0}")]
    NotGroupLike(String),
    #[error("generator index {index} outside 1..={rank}")]
    BadGenerator { index: usize, rank: usize },
    #[error("homogeneous slice is not in the Lie span")]
    NotLie,
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("not a group action: {0}")]
    NotAnAction(String),
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("not a twisted cocycle: {0}")]
    NotTwistedCocycle(String),
    #[error("obstruction cochain left the degree-{degree} Lie slice")]
    LieSliceViolation { degree: usize },
    #[error("invalid section: {0}")]
    SectionInvalid(String),
    #[error("invalid defining system: {0}")]
    InvalidDefiningSystem(String),
    #[error("index function {0} is not supported by this action")]
    UnsupportedJ(String),
    #[error("bad point: {0}")]
    BadPoint(String),
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("parse error: {0}")]
    Parse(String),
}
