use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("matrix is not symmetric at ({i}, {j})")]
    Asymmetric { i: usize, j: usize },
    #[error("{0}")]
    Dimension(String),
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0}")]
    Domain(String),
    #[error("{what} budget exceeded: {needed} > {cap}")]
    BudgetExceeded {
        what: &'static str,
        needed: String,
        cap: String,
    },
    #[error("graph is not planar (obstruction on edges {witness:?})")]
    NonPlanar { witness: Vec<usize> },
    #[error("invalid rotation system: {0}")]
    InvalidRotation(String),
    #[error("rotation system is not a planar embedding")]
    NonPlanarEmbedding,
    #[error("cannot factor {0} within the trial-division budget")]
    FactorizationBudget(String),
    #[error("generating form has a negative exponent")]
    NegativeExponent,
    #[error("duplicate interpolation node {0}")]
    DuplicateNode(String),
    #[error("interpolation node 0 gives an all-zero column")]
    DegenerateNode,
    #[error("value {0} is not a monomial over the generators")]
    UnrepresentableValue(String),
    #[error("non-positive value {0}")]
    NonPositive(String),
    #[error("zero exponent vector")]
    ZeroVector,
    #[error("zero base")]
    ZeroBase,
    #[error("polynomial is not symmetric")]
    NotSymmetric,
    #[error("degree {degree} exceeds the degree budget {cap}")]
    DegreeBudget { degree: u64, cap: u64 },
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("edge {0} is a loop")]
    HasLoop(usize),
    #[error("certificate does not validate against the matrix")]
    CertificateMismatch,
    #[error("matrix is rank deficient")]
    RankDeficient,
    #[error("matrix has a negative entry")]
    NegativeEntry,
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Stable upper-case identifier, printed by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "PARSE_ERROR",
            Error::Asymmetric { .. } => "ASYMMETRIC",
            Error::Dimension(_) => "DIMENSION",
            Error::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
            Error::Domain(_) => "DOMAIN",
            Error::BudgetExceeded { .. } => "BUDGET_EXCEEDED",
            Error::NonPlanar { .. } => "NON_PLANAR",
            Error::InvalidRotation(_) => "INVALID_ROTATION",
            Error::NonPlanarEmbedding => "NON_PLANAR_EMBEDDING",
            Error::FactorizationBudget(_) => "FACTORIZATION_BUDGET",
            Error::NegativeExponent => "NEGATIVE_EXPONENT",
            Error::DuplicateNode(_) => "DUPLICATE_NODE",
            Error::DegenerateNode => "DEGENERATE_NODE",
            Error::UnrepresentableValue(_) => "UNREPRESENTABLE_VALUE",
            Error::NonPositive(_) => "NON_POSITIVE",
            Error::ZeroVector => "ZERO_VECTOR",
            Error::ZeroBase => "ZERO_BASE",
            Error::NotSymmetric => "NOT_SYMMETRIC",
            Error::DegreeBudget { .. } => "DEGREE_BUDGET",
            Error::NotSkew => "NOT_SKEW",
            Error::HasLoop(_) => "HAS_LOOP",
            Error::CertificateMismatch => "CERTIFICATE_MISMATCH",
            Error::RankDeficient => "RANK_DEFICIENT",
            Error::NegativeEntry => "NEGATIVE_ENTRY",
            Error::Internal(_) => "INTERNAL",
        }
    }

    /// Input could not be read at all (as opposed to being read and rejected).
    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::Asymmetric { .. } | Error::InvalidRotation(_)
        )
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn budget(what: &'static str, needed: impl ToString, cap: impl ToString) -> Self {
        Error::BudgetExceeded {
            what,
            needed: needed.to_string(),
            cap: cap.to_string(),
        }
    }
}
