//! Scalar special functions shared by every formula in the crate:
//! the rational kernel `z(x) = 1/(1 - e^{-x})` and its logarithmic
//! derivatives, the sine kernel `S_N`, the Riemann zeta function with its
//! first two log-derivative orders, and the `chi'/chi` factor from the
//! functional equation.
//!
//! All operations are pure functions of their inputs and safe to call
//! concurrently. Poles are reported as typed errors, never as `Inf`.

mod chi;
mod gamma;
mod sine;
mod support;
mod zeta;
mod zfun;

pub use chi::{chi_logderiv, log_chi};
pub use gamma::{digamma, lgamma};
pub use sine::sine_kernel;
pub use support::{cexpm1, cpow, is_finite_c};
pub use zeta::{em_error_estimate, stieltjes_coefficients, zeta_suite, ZetaEval, ZetaOrder};
pub use zfun::{z_family, ZFamily};

use num_complex::Complex64;

/// Binary64 complex scalar used throughout.
pub type ComplexValue = Complex64;

/// Truncation controls for the Euler–Maclaurin evaluation of `zeta`.
///
/// `direct_terms` is the number of directly summed terms `M`;
/// `bernoulli_order` is the number of Bernoulli correction terms `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EulerMaclaurinParams {
    pub direct_terms: usize,
    pub bernoulli_order: usize,
}

impl Default for EulerMaclaurinParams {
    fn default() -> Self {
        EulerMaclaurinParams {
            direct_terms: 64,
            bernoulli_order: 12,
        }
    }
}

/// Switch-over region around the pole of `zeta` at `s = 1`.
///
/// Inside `|s - 1| < radius` the Stieltjes series branch is used; the
/// constants are extracted once from a high-order Euler–Maclaurin run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaurentWindow {
    pub radius: f64,
    pub series_order: usize,
}

impl Default for LaurentWindow {
    fn default() -> Self {
        LaurentWindow {
            radius: 0.1,
            series_order: 9,
        }
    }
}
