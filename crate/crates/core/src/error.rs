use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown root system label `{0}`")]
    UnknownType(String),
    #[error("rank {rank} of `{label}` exceeds the supported cap {cap}")]
    RankAboveCap { label: String, rank: usize, cap: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Mismatch { expected: usize, got: usize },
    #[error("object of type {got} passed where {expected} was expected")]
    TypeMismatch { expected: String, got: String },
    #[error("Weyl orbit enumeration exceeded the bound {0}")]
    OrbitBound(usize),
    #[error("series has zero leading coefficient")]
    ZeroLeadingCoefficient,
    #[error("dilation scale must be nonzero")]
    ZeroScale,
    #[error("precision exhausted: needed coefficients below t^{needed}, tracked only below t^{available}")]
    PrecisionExhausted { needed: i64, available: i64 },
    #[error("exact series has unbounded precision; truncate before inverting")]
    UnboundedPrecision,
    #[error("element is not supported on positive root vectors")]
    NotNilpotent,
    #[error("Lie algebra structure check failed: {0}")]
    StructureCheck(String),
    #[error("coweight {0:?} is not dominant integral")]
    NotDominant(Vec<i64>),
    #[error("connection residue {found:?} does not equal {expected:?}")]
    ResidueMismatch { expected: Vec<String>, found: Vec<String> },
    #[error("pole of order {order} where at most {max} is allowed")]
    IrregularSingularity { order: i64, max: i64 },
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
