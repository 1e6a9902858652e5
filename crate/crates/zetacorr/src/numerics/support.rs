//! Small complex-arithmetic helpers used by the special functions.

use num_complex::Complex64;

/// `exp(z) - 1` without cancellation for small `|z|`.
pub fn cexpm1(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        // Taylor series; terms decay fast enough inside |z| < 1/2.
        let mut term = z;
        let mut sum = z;
        for k in 2..40 {
            term *= z / k as f64;
            sum += term;
            if term.norm() < 1e-18 * sum.norm().max(1e-300) {
                break;
            }
        }
        sum
    } else {
        z.exp() - 1.0
    }
}

/// `b^z` for a positive real base, via `exp(z ln b)`.
pub fn cpow(base: f64, z: Complex64) -> Complex64 {
    (z * base.ln()).exp()
}

/// True when both parts are finite.
pub fn is_finite_c(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
