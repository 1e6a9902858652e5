//! Crate-wide error type.
//!
//! Numerical operations in this crate never return `Inf`/`NaN` for pole
//! hits; they return a typed signal instead so callers can apply the
//! analytic cancellations themselves.

use num_complex::Complex64;
use thiserror::Error;

/// Laurent data carried by a pole signal from the `z` family.
///
/// `offset` is the argument reduced modulo `2πi`, i.e. the distance to the
/// nearest pole. Near the pole, `z(x) = 1/offset + 1/2 + offset/12 + O(offset³)`
/// and `(z'/z)'(x) = 1/offset² - 1/12 + O(offset²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZedLaurent {
    pub offset: Complex64,
}

impl ZedLaurent {
    /// Leading Laurent approximation of `z` at the reduced offset.
    pub fn z(&self) -> Complex64 {
        1.0 / self.offset + 0.5 + self.offset / 12.0
    }

    /// Leading Laurent approximation of `(z'/z)'` at the reduced offset.
    pub fn zlog_prime(&self) -> Complex64 {
        1.0 / (self.offset * self.offset) - 1.0 / 12.0
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("argument is within collision tolerance of a pole of z (offset {:?})", .0.offset)]
    PoleAtZero(ZedLaurent),
    #[error("zeta(s) has a pole at s = 1")]
    PoleAtOne,
    #[error("zeta(s) vanishes within tolerance at the requested point; log-derivative undefined")]
    ZeroDenominator,
    #[error("argument hits a pole of Gamma entering chi")]
    PoleOfGamma,
    #[error("prime cutoff {0} is below the minimum of 11")]
    CutoffTooSmall(u64),
    #[error("shift arity mismatch: {0}")]
    ArityMismatch(&'static str),
    #[error("shift with real part {0} outside the admissible strip |Re| < 1/4")]
    StripViolation(f64),
    #[error("local Euler factor is singular for these shifts at p = {0}")]
    LocalPole(u64),
    #[error("theta quadrature did not converge under node doubling (delta {0:.3e})")]
    QuadratureNotConverged(f64),
    #[error("theta-integral denominator too close to zero ({0:.3e})")]
    DenominatorNearZero(f64),
    #[error("ratios-theorem side condition violated: {0}")]
    SideConditionViolated(&'static str),
    #[error("pole collision: {0}")]
    PoleCollision(String),
    #[error("assembled correlation has non-negligible imaginary part {0:.3e}")]
    ImaginaryResidue(f64),
    #[error("enumeration guard exceeded: {0}")]
    TooLarge(&'static str),
    #[error("evaluation guard exceeded: {0}")]
    GuardExceeded(&'static str),
    #[error("zero ordinates not ascending at line {0}")]
    NotAscending(usize),
    #[error("could not parse ordinate at line {0}")]
    ParseError(usize),
    #[error("zero table file contains no ordinates")]
    EmptyFile,
    #[error("no zeros fall inside the requested window")]
    WindowEmpty,
    #[error("test-function support exceeds the sliding-window limit")]
    SupportTooWide,
    #[error("probe circle does not isolate the pole (Laurent data unstable under radius halving)")]
    ProbeNotIsolated,
    #[error("missing input: {0}")]
    MissingInput(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
