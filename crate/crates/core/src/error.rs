use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime in [2, 2^31)")]
    NotPrime(u64),
    #[error("value `{value}` is not an element of {field}")]
    NotInField { value: String, field: String },
    #[error("cannot parse scalar `{0}`")]
    BadScalar(String),
    #[error("matrices live in different ambient spaces ({0} vs {1} rows)")]
    MixedAmbient(usize, usize),
    #[error("matrices are defined over different fields")]
    MixedField,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("matrix is singular")]
    Singular,
    #[error("columns are linearly dependent (rank {rank} < {cols})")]
    RankDeficient { rank: usize, cols: usize },
    #[error("subspace meets the chart complement nontrivially")]
    NotInChart,
    #[error("no common complement exists over F_{0}; use a larger prime")]
    NoCommonComplement(u32),
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("invalid stratum descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("stratum F_{h}^{i}({k},{n}) is empty")]
    EmptyStratum { h: usize, k: usize, n: usize, i: usize },
    #[error("rank {r} exceeds min({m}, {mprime})")]
    RankTooLarge { r: usize, m: usize, mprime: usize },
    #[error("enumeration needs {needed} visits, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("interpolation needs {needed} distinct primes, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("count at held-out q={q} is {observed}, interpolant predicts {predicted}")]
    NonPolynomialFit { q: u32, observed: String, predicted: String },
    #[error("only {available} distinct {k}-subspaces of F_{q}^{n}, {requested} requested")]
    NotEnoughSubspaces { k: usize, n: usize, q: u32, available: String, requested: usize },
    #[error("gave up after {attempts} attempts")]
    MaxAttemptsExceeded { attempts: usize },
    #[error("malformed input: {0}")]
    Malformed(String),
}
