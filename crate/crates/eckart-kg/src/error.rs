//! Error type shared by all modules.

/// Crate-wide error enum.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("missing config field `{0}`")]
    MissingField(&'static str),
    #[error("config field `{0}` is not a finite number")]
    NonFinite(&'static str),
    #[error("config field `{0}` must be positive")]
    NonPositive(&'static str),
    #[error("config syntax: {0}")]
    ConfigSyntax(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid solver settings: {0}")]
    InvalidSettings(String),
    #[error("discriminant alpha^2 - 8(E+M)V1 = {0} is negative: no real superpotential at this trial energy")]
    ComplexDiscriminant(f64),
    #[error("superpotential tilt is undefined: B = 0 with V2 != 0")]
    DivisionByZero,
    #[error("shape-invariance map singular: stepped coefficient vanishes")]
    SingularMap,
    #[error("ladder terminated before step {n}: no normalizable level there")]
    LadderTerminated { n: u32 },
    #[error("delta radicand 1 - 8(E+M)V1/alpha^2 = {0} is negative at this trial energy")]
    ComplexDelta(f64),
    #[error("degenerate index: n + delta = 0 makes the spectrum condition singular")]
    DegenerateIndex,
    #[error("no bound level with index {n}")]
    NoRoot { n: u32 },
    #[error("root refinement did not converge within {max_iter} iterations")]
    NoConvergence { max_iter: u32 },
    #[error("Simpson quadrature needs an odd sample count >= 3, got {0}")]
    EvenSampleCount(usize),
    #[error("second-difference stencil needs at least 3 samples, got {0}")]
    TooFewSamples(usize),
    #[error("wavefunction grows toward a grid end: not normalizable")]
    NotNormalizable,
    #[error("inverse-iteration shift lies within {0:e} of a neighboring eigenvalue")]
    IllConditionedShift(f64),
    #[error("no self-consistent bound state for eigenvalue index {k}")]
    NoBoundState { k: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
