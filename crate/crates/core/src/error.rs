use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vectors live in different lattices")]
    LatticeMismatch,

    #[error("operation undefined on the zero vector")]
    ZeroVector,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("invalid finite quadratic form: {0}")]
    InvalidForm(String),

    #[error("unrealizable polarization (t={t}, d={d}, gamma={gamma}): {reason}")]
    Unrealizable {
        t: u64,
        d: u64,
        gamma: u64,
        reason: String,
    },

    #[error("several admissible values of c for t={t}, d={d}, gamma={gamma}: {candidates:?}; pass one explicitly")]
    AmbiguousC {
        t: u64,
        d: u64,
        gamma: u64,
        candidates: Vec<u64>,
    },

    #[error("omega = gcd(2t/gamma, gamma) = {omega}; the split discriminant presentation requires omega = 1")]
    OmegaUnsupported { omega: u64 },

    #[error("group of order {order} is too large to enumerate (budget {budget})")]
    BudgetExceeded { order: u64, budget: u64 },

    #[error("vector does not define a reflection: {0}")]
    NotReflection(String),

    #[error("normality of the monodromy subgroup is not established: {0}")]
    NormalityNotEstablished(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag naming the rule that fired.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::LatticeMismatch => "lattice_mismatch",
            Error::ZeroVector => "zero_vector",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidLattice(_) => "invalid_lattice",
            Error::InvalidVector(_) => "invalid_vector",
            Error::InvalidForm(_) => "invalid_form",
            Error::Unrealizable { .. } => "unrealizable_polarization",
            Error::AmbiguousC { .. } => "ambiguous_c",
            Error::OmegaUnsupported { .. } => "omega_ne_1_unsupported",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::NotReflection(_) => "not_a_reflection",
            Error::NormalityNotEstablished(_) => "normality_not_established",
            Error::Unsupported(_) => "unsupported",
            Error::Overflow(_) => "overflow",
            Error::Parse(_) => "parse_error",
        }
    }

    /// Process exit code used by the CLI: 3 for budget exhaustion, 2 for
    /// every validation failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 3,
            _ => 2,
        }
    }
}
