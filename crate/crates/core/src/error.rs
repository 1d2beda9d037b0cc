use thiserror::Error;

/// Errors surfaced by the algebra kernel.
#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("division by zero in Q[v]/Phi_l")]
    DivisionByZero,

    #[error("element is not 2-integral: denominator {0} is not a power of 2")]
    NotDyadic(String),

    #[error("coordinate support exceeds the truncation bound: needs t <= {needed}, bound is {bound}")]
    Truncation { needed: usize, bound: usize },

    #[error("divided-power degree {needed} exceeds the bound {bound}")]
    DegreeOverflow { needed: usize, bound: usize },

    #[error("evaluation window of {0} points is too small or degenerate for interpolation")]
    SingularWindow(usize),

    #[error("inconsistent interpolation data: values do not come from an element within the bound")]
    InconsistentValues,

    #[error("operands belong to different rings (l = {0} vs l = {1})")]
    RingMismatch(u64, u64),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
