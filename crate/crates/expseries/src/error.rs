use std::fmt;

/// Errors shared by all modules of this crate.
///
/// Non-convergence of a truncated series is *not* an error: evaluations report
/// it through [`crate::series::SeriesEval::converged`] together with the best
/// value reached, so callers can decide what to do with a partial sum.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input outside the mathematical domain of the operation
    /// (e.g. order 0, an odd order where an even one is required, σ ≤ 0).
    Domain(String),
    /// The exponential prefactor e^(±x^n) leaves the supported working range
    /// (the library guarantees its tolerances only for growing exponents ≤ 45).
    Overflow { exponent: f64 },
    /// The requested definite integral diverges at one of its endpoints.
    DivergentIntegral(String),
    /// A moment of the given order was required but not supplied.
    MissingMoment { order: u32 },
    /// The reference moment appearing in a denominator is zero.
    ZeroDenominator { order: u32 },
    /// An empty data set was supplied where at least one observation is needed.
    EmptyData,
    /// The number of abscissas does not match the number of components.
    DimensionMismatch { expected: usize, got: usize },
    /// The evaluation grid contains x = 0, where the normalized equation
    /// forms divide by x.
    GridContainsZero,
    /// Adaptive subdivision reached the depth limit before meeting the
    /// tolerance; `value` is the best estimate and `est_error` its honest
    /// error estimate.
    DepthExceeded { value: f64, est_error: f64 },
}

impl Error {
    /// Short machine-readable category tag, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Overflow { .. } => "overflow",
            Error::DivergentIntegral(_) => "divergent-integral",
            Error::MissingMoment { .. } => "missing-moment",
            Error::ZeroDenominator { .. } => "zero-denominator",
            Error::EmptyData => "empty-data",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::GridContainsZero => "grid-contains-zero",
            Error::DepthExceeded { .. } => "depth-exceeded",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Overflow { exponent } => write!(
                f,
                "overflow: exponential prefactor exp({exponent}) exceeds the working range (exponent > 45)"
            ),
            Error::DivergentIntegral(msg) => write!(f, "divergent integral: {msg}"),
            Error::MissingMoment { order } => {
                write!(f, "missing moment: order {order} required but not supplied")
            }
            Error::ZeroDenominator { order } => {
                write!(f, "zero denominator: reference moment of order {order} is zero")
            }
            Error::EmptyData => write!(f, "empty data set"),
            Error::DimensionMismatch { expected, got } => write!(
                f,
                "dimension mismatch: {expected} components but {got} abscissas"
            ),
            Error::GridContainsZero => {
                write!(f, "grid contains x = 0 where the normalized forms divide by x")
            }
            Error::DepthExceeded { value, est_error } => write!(
                f,
                "quadrature depth exceeded: best value {value} with estimated error {est_error}"
            ),
        }
    }
}

impl std::error::Error for Error {}
