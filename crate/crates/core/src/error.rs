use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("a system needs at least one map")]
    EmptySystem,

    #[error("map {} has slope {slope} with modulus >= 1", .map + 1)]
    NonContractive { map: usize, slope: f64 },

    #[error("enumeration of {requested} intervals exceeds the budget of {budget}")]
    BudgetExceeded { requested: u128, budget: u64 },

    #[error("every cylinder interval has zero length")]
    DegenerateAttractor,

    #[error("breaking code check failed: {0}")]
    ToleranceViolation(String),

    #[error("graph is not strongly connected ({components} components)")]
    NotStronglyConnected { components: usize },

    #[error("no convergence: {0}")]
    ConvergenceFailure(String),

    #[error("breaking point {point} lies inside a cylinder but has no verified code")]
    UnverifiedCode { point: f64 },

    #[error("breaking point {point} is not coded by a purely periodic sequence")]
    NonPeriodicCode { point: f64 },

    #[error("cannot certify edge {source_node} -> {target_node}: {reason}")]
    AmbiguousContainment {
        source_node: String,
        target_node: String,
        reason: String,
    },

    #[error("first cylinder intervals are not pairwise disjoint (gap {gap})")]
    IoscViolated { gap: f64 },

    #[error("system is not injective")]
    NotInjective,

    #[error("fixed points must satisfy 0 < phi_2 < ... < phi_(m-1) < 1")]
    BadFixedPointOrder,

    #[error("determinant root {determinant} does not match the spectral crossing {spectral}")]
    RootMismatch { spectral: f64, determinant: f64 },

    #[error("graph has no nodes or no edges")]
    EmptyGraph,

    #[error("box counting needs at least 4 scales spanning 2 decades (got {count} scales, ratio {span})")]
    InsufficientScales { count: usize, span: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    InvalidInput(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }

    pub fn is_input(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::InvalidMap(_)
                | Error::EmptySystem
                | Error::NonContractive { .. }
        )
    }
}
