use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("images {0} do not form a bijection")]
    NotBijective(String),

    #[error("degree {0} is outside the supported range 1..={max}", max = crate::perm::MAX_DEGREE)]
    UnsupportedDegree(usize),

    #[error("enumeration exceeded the bound of {bound} elements (reached {reached})")]
    TooLarge { bound: usize, reached: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("exhaustive sweep needs {colorings} colorings, above the threshold {threshold}; use the csp strategy")]
    ExhaustiveInfeasible { colorings: u128, threshold: u64 },

    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),

    #[error("{0} is not a prime power in 2..=64")]
    UnsupportedField(usize),

    #[error("unknown catalog group `{0}`")]
    UnknownGroup(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("transformation is not an element of the monoid")]
    NotInMonoid,

    #[error("the group does not normalize the monoid")]
    NotNormalizing,

    #[error("transfer law `{law}` violated: {witness}")]
    LawViolated { law: String, witness: String },
}
