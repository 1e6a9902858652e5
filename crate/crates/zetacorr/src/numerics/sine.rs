//! The sine kernel `S_N(θ) = sin(Nθ/2) / sin(θ/2)`.

/// Evaluate `S_N(θ)`, taking the analytic limit at the removable
/// singularities `θ ≡ 0 (mod 2π)` (value `N` at `θ = 0`).
pub fn sine_kernel(n: u32, theta: f64) -> f64 {
    let half = theta / 2.0;
    let denom = half.sin();
    if denom.abs() < 1e-9 {
        // L'Hôpital at θ = 2πm: N cos(Nθ/2)/cos(θ/2). Using the actual
        // cosines keeps the (-1)^{m(N+1)} sign for even N correct.
        return n as f64 * (n as f64 * half).cos() / half.cos();
    }
    (n as f64 * half).sin() / denom
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn limit_at_zero_is_n() {
        assert_eq!(sine_kernel(3, 0.0), 3.0);
        assert!((sine_kernel(8, 1e-12) - 8.0).abs() < 1e-6);
    }

    #[test]
    fn zero_of_even_kernel() {
        assert!(sine_kernel(4, PI).abs() < 1e-12);
    }

    #[test]
    fn known_value_n2() {
        assert!((sine_kernel(2, PI / 2.0) - 2.0f64.sqrt()).abs() < 1e-12);
    }

    /// Independent route: S_N(θ) = Σ_{k=0}^{N-1} e^{i(k-(N-1)/2)θ}.
    fn dirichlet_sum(n: u32, theta: f64) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let phase = (k as f64 - (n as f64 - 1.0) / 2.0) * theta;
            acc += Complex64::new(0.0, phase).exp();
        }
        acc.re
    }

    proptest! {
        #[test]
        fn matches_dirichlet_sum(n in 1u32..12, theta in -10.0f64..10.0) {
            let lhs = sine_kernel(n, theta);
            let rhs = dirichlet_sum(n, theta);
            prop_assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0));
        }

        #[test]
        fn even_in_theta(n in 1u32..12, theta in 0.0f64..10.0) {
            prop_assert!((sine_kernel(n, theta) - sine_kernel(n, -theta)).abs() < 1e-12);
        }
    }
}
