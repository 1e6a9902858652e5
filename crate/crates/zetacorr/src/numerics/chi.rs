//! The functional-equation factor `χ` in `ζ(s) = χ(s) ζ(1-s)`, through its
//! logarithm and logarithmic derivative:
//!
//! `χ(s) = 2 (2π)^{s-1} Γ(1-s) cos(π(1-s)/2)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;

use super::gamma::{digamma, lgamma};

/// `log cos(z)` without overflow for large `|Im z|` (correct modulo 2πi).
fn log_cos(z: Complex64) -> Complex64 {
    let y = z.im;
    if y > 30.0 {
        // cos z = e^{-iz}(1 + e^{2iz})/2
        let small = (Complex64::new(0.0, 2.0) * z).exp();
        -Complex64::i() * z - 2.0f64.ln() + (1.0 + small).ln()
    } else if y < -30.0 {
        let small = (Complex64::new(0.0, -2.0) * z).exp();
        Complex64::i() * z - 2.0f64.ln() + (1.0 + small).ln()
    } else {
        z.cos().ln()
    }
}

/// `tan(z)` without overflow for large `|Im z|`.
fn tan_safe(z: Complex64) -> Complex64 {
    let y = z.im;
    if y > 30.0 {
        let small = (Complex64::new(0.0, 2.0) * z).exp();
        Complex64::i() * (1.0 - small) / (1.0 + small)
    } else if y < -30.0 {
        let small = (Complex64::new(0.0, -2.0) * z).exp();
        -Complex64::i() * (1.0 - small) / (1.0 + small)
    } else {
        z.tan()
    }
}

/// `log χ(s)`, correct modulo `2πi` (the `X_t` products only ever
/// exponentiate sums of these).
pub fn log_chi(s: Complex64) -> Result<Complex64> {
    let u = 1.0 - s;
    Ok(2.0f64.ln() + (s - 1.0) * (2.0 * PI).ln() + lgamma(u)? + log_cos(PI * u / 2.0))
}

/// `χ'/χ(s) = log 2π - ψ(1-s) + (π/2) tan(π(1-s)/2)`.
///
/// On the critical line this is `-log(|t|/2π) (1 + O(1/|t|))`, the local
/// zero-density factor.
pub fn chi_logderiv(s: Complex64) -> Result<Complex64> {
    let u = 1.0 - s;
    Ok((2.0 * PI).ln() - digamma(u)? + PI / 2.0 * tan_safe(PI * u / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asymptotic_on_critical_line_at_1e3() {
        let s = Complex64::new(0.5, 1000.0);
        let v = chi_logderiv(s).unwrap();
        let expect = -(1000.0 / (2.0 * PI)).ln();
        assert!((v.re - expect).abs() < 2e-3, "{} vs {}", v.re, expect);
    }

    #[test]
    fn asymptotic_on_critical_line_at_1e6() {
        let s = Complex64::new(0.5, 1e6);
        let v = chi_logderiv(s).unwrap();
        let expect = -(1e6 / (2.0 * PI)).ln();
        assert!((v.re - expect).abs() < 2e-6);
    }

    #[test]
    fn functional_symmetry() {
        // χ(s)χ(1-s) = 1 gives χ'/χ(s) = χ'/χ(1-s) identically.
        for &s in &[
            Complex64::new(0.3, 7.0),
            Complex64::new(0.5, 123.4),
            Complex64::new(0.8, -15.0),
        ] {
            let a = chi_logderiv(s).unwrap();
            let b = chi_logderiv(1.0 - s).unwrap();
            assert!((a - b).norm() < 1e-10 * a.norm().max(1.0));
        }
    }

    #[test]
    fn matches_centered_differences_of_log_chi() {
        let s = Complex64::new(0.5, 50.0);
        let h = 1e-5;
        let fd = (log_chi(s + h).unwrap() - log_chi(s - h).unwrap()) / (2.0 * h);
        let v = chi_logderiv(s).unwrap();
        assert!((fd - v).norm() < 1e-6 * v.norm().max(1.0));
    }

    #[test]
    fn log_chi_reproduces_functional_equation_value() {
        // ζ(s) = χ(s) ζ(1-s) at s = 0.3 + 2i, with ζ from the suite.
        use crate::numerics::{zeta_suite, EulerMaclaurinParams, LaurentWindow, ZetaOrder};
        let em = EulerMaclaurinParams::default();
        let w = LaurentWindow::default();
        let s = Complex64::new(0.3, 2.0);
        let lhs = zeta_suite(s, ZetaOrder::Value, em, w).unwrap();
        let rhs = log_chi(s).unwrap().exp() * zeta_suite(1.0 - s, ZetaOrder::Value, em, w).unwrap();
        assert!((lhs - rhs).norm() < 1e-10 * lhs.norm());
    }
}
