use thiserror::Error;

/// Errors raised by the library. Every variant is a domain error: the inputs
/// were well-formed enough to parse but violate a precondition.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("vector norm {norm} is not within {tolerance:e} of 1")]
    NotUnit { norm: f64, tolerance: f64 },

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("dimension must be at least {min}, got {actual}")]
    DimensionTooSmall { min: usize, actual: usize },

    #[error("degenerate code: {0}")]
    DegenerateCode(String),

    #[error("duplicate code points at indices {0} and {1}")]
    DuplicatePoint(usize, usize),

    #[error("point {index} lies on the projection axis")]
    PointOnAxis { index: usize },

    #[error("parameter {name} = {value} outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("first spoiling with lambda = 0 collapses the code to a single pole")]
    Collapse,

    #[error("empty hemisphere: no code point on the {0} side")]
    EmptyHemisphere(&'static str),

    #[error("no balanced line found within {trials} trials")]
    SearchExhausted { trials: usize },

    #[error("required lambda {lambda} outside [0, 1]: {reason}")]
    LambdaOutOfRange { lambda: f64, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("binary word length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("partial function undefined on word {0}")]
    Undefined(String),

    #[error("anchor point ({0}, {1}) lies on the boundary of the parameter domain")]
    DegenerateAnchor(f64, f64),

    #[error("point lies outside the cutoff region: {0}")]
    OutsideCutoff(String),

    #[error("singular lattice basis (|det| = {0:e})")]
    SingularBasis(f64),

    #[error("translates {0} and {1} differ by a lattice vector")]
    TranslatesCongruent(usize, usize),

    #[error("spheres overlap: centers {distance} apart, need {required}")]
    Overlap { distance: f64, required: f64 },

    #[error("enumeration exceeded the point budget of {0}")]
    BudgetExceeded(usize),

    #[error("no sphere centers at distance {0} (shell has {1} points)")]
    EmptyShell(f64, usize),

    #[error("no tangent neighbours around center {0}")]
    NoTangency(usize),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
