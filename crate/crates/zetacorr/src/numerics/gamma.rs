//! Complex log-gamma and digamma via Stirling expansions with recurrence.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `B_{2k}/(2k(2k-1))` for the Stirling series of `log Γ`.
const LGAMMA_COEFF: [f64; 9] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
];

/// `B_{2k}/(2k)` for the Stirling series of `ψ`.
const DIGAMMA_COEFF: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

fn near_nonpositive_integer(z: Complex64) -> bool {
    z.re <= 0.5 && z.im.abs() < 1e-9 && (z.re - z.re.round()).abs() < 1e-9 && z.re.round() <= 0.0
}

/// Principal-branch `log Γ(z)` for `Re z > 0` (recurrence-lifted Stirling).
///
/// For `Re z <= 0` the reflection formula is applied; the result is then
/// correct modulo `2πi`, which is all the `chi`-factor products need.
pub fn lgamma(z: Complex64) -> Result<Complex64> {
    if near_nonpositive_integer(z) {
        return Err(Error::PoleOfGamma);
    }
    // Reflection only near the real axis, where the poles live; away from
    // it Stirling handles the left half-plane fine and sin(πz) would
    // overflow anyway.
    if z.re < 0.5 && z.im.abs() < 20.0 {
        // log Γ(z) = log(π / sin(πz)) - log Γ(1 - z)
        let s = (PI * z).sin();
        if s.norm() < 1e-300 {
            return Err(Error::PoleOfGamma);
        }
        let refl = (Complex64::new(PI, 0.0) / s).ln();
        return Ok(refl - lgamma(1.0 - z)?);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 12.0 {
        shift += w.ln();
        w += 1.0;
    }
    let mut series = Complex64::new(0.0, 0.0);
    let w2 = w * w;
    let mut pw = w;
    for c in LGAMMA_COEFF {
        series += c / pw;
        pw *= w2;
    }
    let half_log_2pi = 0.5 * (2.0 * PI).ln();
    Ok((w - 0.5) * w.ln() - w + half_log_2pi + series - shift)
}

/// Complex digamma `ψ(z)`.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if near_nonpositive_integer(z) {
        return Err(Error::PoleOfGamma);
    }
    if z.re < 0.0 && z.im.abs() < 20.0 {
        // ψ(z) = ψ(1 - z) - π cot(πz)
        let t = (PI * z).tan();
        if t.norm() < 1e-300 {
            return Err(Error::PoleOfGamma);
        }
        return Ok(digamma(1.0 - z)? - PI / t);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 12.0 {
        acc -= 1.0 / w;
        w += 1.0;
    }
    let inv2 = 1.0 / (w * w);
    let mut series = Complex64::new(0.0, 0.0);
    let mut pw = inv2;
    for c in DIGAMMA_COEFF {
        series += c * pw;
        pw *= inv2;
    }
    Ok(acc + w.ln() - 0.5 / w - series)
}
