use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NonHermitian(f64),
    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NonSymmetric(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
    #[error("empty input")]
    EmptyInput,
    #[error("matrix is singular")]
    Singular,
    #[error("invalid scenario: {0}")]
    InvalidScenario(&'static str),
    #[error("table length {got} does not match scenario (expected {expected})")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("scenarios of functional and behavior differ")]
    ScenarioMismatch,
    #[error("operation requires scenario {0}")]
    WrongScenario(&'static str),
    #[error("unsupported number of parties {0}")]
    UnsupportedN(usize),
    #[error("behavior is not a valid no-signaling table (defect {0:e})")]
    InvalidBehavior(f64),
    #[error("problem too large: {count} exceeds cap {cap}")]
    TooLarge { count: u128, cap: u128 },
    #[error("simplex did not terminate within {0} pivots")]
    LpStall(usize),
    #[error("angle {0} outside [0, pi]")]
    AngleOutOfRange(f64),
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("search budget exceeded: {points} grid points > {budget}")]
    BudgetExceeded { points: u128, budget: u128 },
    #[error("psi-hat is singular (det {0:e})")]
    SingularPsiHat(f64),
    #[error("state does not satisfy psi-hat^T psi-hat proportional to identity")]
    ConditionViolated,
    #[error("degenerate denominator in lambda^2 ({0:e})")]
    DegenerateDenominator(f64),
    #[error("state has a non-zero imaginary part")]
    NonRealState,
    #[error("Gram completion did not converge after {iterations} iterations (defect {defect:e})")]
    DidNotConverge { iterations: usize, defect: f64 },
    #[error("invalid correlation table: {0}")]
    InvalidTable(&'static str),
    #[error("linear hulls of the x and y vectors differ (ranks {rank_x}, {rank_y}, union {rank_union})")]
    HullMismatch { rank_x: usize, rank_y: usize, rank_union: usize },
    #[error("precondition not met: {0}")]
    PreconditionNotMet(&'static str),
}
