//! The kernel `z(x) = 1/(1 - e^{-x})` and its logarithmic derivatives.
//!
//! `z` plays the role for unitary-matrix averages that `zeta(1 + x)` plays
//! on the number-theory side. It has simple poles at `x = 2πik`; callers
//! that need the removable-singularity cancellations receive the Laurent
//! data through [`Error::PoleAtZero`] instead of an `Inf`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result, ZedLaurent};

use super::support::cexpm1;

/// Default distance below which an argument counts as a pole hit.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// Values of `z`, `z'/z` and `(z'/z)'` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZFamily {
    /// `z(x) = 1/(1 - e^{-x})`
    pub z: Complex64,
    /// `(z'/z)(x) = -1/(e^x - 1)`
    pub zlog: Complex64,
    /// `(z'/z)'(x) = e^x/(e^x - 1)^2`
    pub zlog_prime: Complex64,
}

/// Distance from `x` to the nearest pole `2πik`, together with the reduced
/// offset `x - 2πik`.
pub(crate) fn reduce_mod_poles(x: Complex64) -> Complex64 {
    let k = (x.im / TAU).round();
    Complex64::new(x.re, x.im - k * TAU)
}

/// Evaluate `z`, `z'/z`, `(z'/z)'` at `x`.
///
/// Signals [`Error::PoleAtZero`] carrying Laurent data when `x` is within
/// `POLE_TOLERANCE` of a pole `2πik`.
pub fn z_family(x: Complex64) -> Result<ZFamily> {
    let offset = reduce_mod_poles(x);
    if offset.norm() < POLE_TOLERANCE {
        return Err(Error::PoleAtZero(ZedLaurent { offset }));
    }
    // w = e^x - 1; all three members are rational in w.
    let w = cexpm1(x);
    let z = (1.0 + w) / w;
    let zlog = -1.0 / w;
    let zlog_prime = (1.0 + w) / (w * w);
    Ok(ZFamily {
        z,
        zlog,
        zlog_prime,
    })
}
