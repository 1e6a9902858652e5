//! Everything indexed by primes: the sieve behind [`PrimeContext`], the
//! closed-form Euler products and prime sums of the example formulas
//! ([`closed`]), and the per-prime theta-integral machinery of the general
//! arithmetic factor ([`local`]).

pub mod closed;
pub mod local;

pub use closed::{closed_form_prime_term, PrimeTermKind};
pub use local::{
    arithmetic_factor, c_st, h_p1, h_p2, local_factor, LocalShiftData, ThetaQuadrature,
};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// How to account for the primes beyond the cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailPolicy {
    /// Plain truncation; report the raw partial sum/product.
    None,
    /// Fit `|term(p)| ≈ c (ln p)^m p^{-σ}` on the trailing primes and add
    /// the integrated tail (prime density `1/ln x`) to the result.
    #[default]
    GeometricEstimate,
}

/// Estimated tail attached to a truncated evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailInfo {
    pub estimate: Complex64,
    /// Heuristic bound on the discarded tail (2x the fitted estimate).
    pub bound: f64,
}

/// A truncated prime sum or product with optional tail correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimeTruncated {
    /// Truncation plus tail correction when the policy estimates one.
    pub value: Complex64,
    /// The plain truncated value.
    pub raw: Complex64,
    pub tail: Option<TailInfo>,
}

/// Sieve of all primes up to `cutoff`, plus the truncation policy used by
/// every Euler product and prime sum in the crate. Immutable after
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeContext {
    cutoff: u64,
    primes: Vec<u64>,
    pub tail_policy: TailPolicy,
}

impl PrimeContext {
    /// Exact sieve of Eratosthenes up to `cutoff` (must be at least 11).
    pub fn new(cutoff: u64) -> Result<Self> {
        Self::with_policy(cutoff, TailPolicy::default())
    }

    pub fn with_policy(cutoff: u64, tail_policy: TailPolicy) -> Result<Self> {
        if cutoff < 11 {
            return Err(Error::CutoffTooSmall(cutoff));
        }
        let n = cutoff as usize;
        let mut is_composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for p in 2..=n {
            if !is_composite[p] {
                primes.push(p as u64);
                let mut q = p * p;
                while q <= n {
                    is_composite[q] = true;
                    q += p;
                }
            }
        }
        Ok(PrimeContext {
            cutoff,
            primes,
            tail_policy,
        })
    }

    /// A context with no primes at all: every Euler product degenerates to
    /// 1 and every prime sum to 0. This is the prime-free limit in which
    /// the zero-side machinery collapses onto the eigenvalue side.
    pub fn empty() -> Self {
        PrimeContext {
            cutoff: 0,
            primes: Vec::new(),
            tail_policy: TailPolicy::None,
        }
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Deterministic sum of `term(p)` over the sieved primes (ascending
    /// order), with the policy's tail handling.
    pub fn sum_over_primes<F>(&self, term: F) -> PrimeTruncated
    where
        F: Fn(u64) -> Complex64,
    {
        let terms: Vec<Complex64> = self.primes.iter().map(|&p| term(p)).collect();
        let raw: Complex64 = terms.iter().sum();
        self.finish(raw, &terms)
    }

    /// Deterministic product of `factor(p)` over the sieved primes; the
    /// tail is estimated on `ln factor(p)` and applied as `exp(tail)`.
    pub fn product_over_primes<F>(&self, factor: F) -> PrimeTruncated
    where
        F: Fn(u64) -> Complex64,
    {
        let factors: Vec<Complex64> = self.primes.iter().map(|&p| factor(p)).collect();
        self.product_of_factors(&factors)
    }

    /// Product of pre-computed per-prime factors (ascending prime order).
    pub fn product_of_factors(&self, factors: &[Complex64]) -> PrimeTruncated {
        debug_assert_eq!(factors.len(), self.primes.len());
        let mut raw = Complex64::new(1.0, 0.0);
        for f in factors {
            raw *= f;
        }
        let logs: Vec<Complex64> = factors.iter().map(|f| f.ln()).collect();
        match self.tail_policy {
            TailPolicy::None => PrimeTruncated {
                value: raw,
                raw,
                tail: None,
            },
            TailPolicy::GeometricEstimate => {
                let tail = self.estimate_tail(&logs);
                PrimeTruncated {
                    value: raw * tail.estimate.exp(),
                    raw,
                    tail: Some(tail),
                }
            }
        }
    }

    fn finish(&self, raw: Complex64, terms: &[Complex64]) -> PrimeTruncated {
        match self.tail_policy {
            TailPolicy::None => PrimeTruncated {
                value: raw,
                raw,
                tail: None,
            },
            TailPolicy::GeometricEstimate => {
                let tail = self.estimate_tail(terms);
                PrimeTruncated {
                    value: raw + tail.estimate,
                    raw,
                    tail: Some(tail),
                }
            }
        }
    }

    /// Fit the trailing terms to `c (ln p)^m p^{-σ}` and integrate past the
    /// cutoff against the prime density `1/ln x`. Purely heuristic; the
    /// bound reported is twice the estimate's magnitude.
    fn estimate_tail(&self, terms: &[Complex64]) -> TailInfo {
        let n = terms.len();
        let take = (n / 4).clamp(16, 64).min(n);
        let start = n - take;
        let pts: Vec<(f64, Complex64)> = (start..n)
            .filter(|&i| terms[i].norm() > 1e-300)
            .map(|i| (self.primes[i] as f64, terms[i]))
            .collect();
        if pts.len() < 8 {
            return TailInfo {
                estimate: Complex64::new(0.0, 0.0),
                bound: 0.0,
            };
        }
        // Least squares of ln|g| - m ln ln p = ln c - σ ln p over m = 0..4.
        let mut best: Option<(f64, usize, f64, f64)> = None; // (resid, m, sigma, lnc)
        for m in 0..=4usize {
            let mut sx = 0.0;
            let mut sy = 0.0;
            let mut sxx = 0.0;
            let mut sxy = 0.0;
            let k = pts.len() as f64;
            for (p, g) in &pts {
                let x = p.ln();
                let y = g.norm().ln() - m as f64 * p.ln().ln();
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
            }
            let denom = k * sxx - sx * sx;
            if denom.abs() < 1e-12 {
                continue;
            }
            let slope = (k * sxy - sx * sy) / denom;
            let intercept = (sy - slope * sx) / k;
            let mut resid = 0.0;
            for (p, g) in &pts {
                let x = p.ln();
                let y = g.norm().ln() - m as f64 * p.ln().ln();
                let e = y - (intercept + slope * x);
                resid += e * e;
            }
            if best.map_or(true, |(r, ..)| resid < r) {
                best = Some((resid, m, -slope, intercept));
            }
        }
        let Some((_, m, sigma, _)) = best else {
            return TailInfo {
                estimate: Complex64::new(0.0, 0.0),
                bound: 0.0,
            };
        };
        if sigma <= 1.02 {
            // Fit looks non-convergent; refuse to extrapolate.
            return TailInfo {
                estimate: Complex64::new(0.0, 0.0),
                bound: f64::INFINITY,
            };
        }
        // Complex amplitude from the de-trended terms.
        let mut c = Complex64::new(0.0, 0.0);
        for (p, g) in &pts {
            c += g * p.powf(sigma) / p.ln().powi(m as i32);
        }
        c /= pts.len() as f64;
        // ∫_P^∞ (ln x)^{m-1} x^{-σ} dx = Γ(m, (σ-1) ln P) / (σ-1)^m
        let z = (sigma - 1.0) * (self.cutoff.max(2) as f64).ln();
        let integral = upper_gamma_int(m, z) / (sigma - 1.0).powi(m as i32);
        let estimate = c * integral;
        TailInfo {
            bound: 2.0 * estimate.norm(),
            estimate,
        }
    }
}

/// Upper incomplete gamma `Γ(k, z)` for integer `k ≥ 0` and real `z > 0`;
/// `Γ(0, z) = E₁(z)`.
fn upper_gamma_int(k: usize, z: f64) -> f64 {
    if k == 0 {
        return exp_integral_e1(z);
    }
    // Γ(k, z) = (k-1)! e^{-z} Σ_{j<k} z^j/j!
    let mut fact = 1.0;
    for j in 1..k {
        fact *= j as f64;
    }
    let mut s = 0.0;
    let mut zj = 1.0;
    let mut jf = 1.0;
    for j in 0..k {
        if j > 0 {
            zj *= z;
            jf *= j as f64;
        }
        s += zj / jf;
    }
    fact * (-z).exp() * s
}

/// Exponential integral `E₁(z)` for real `z > 0`.
fn exp_integral_e1(z: f64) -> f64 {
    if z <= 0.0 {
        return f64::INFINITY;
    }
    if z < 1.0 {
        // series: -γ - ln z + Σ (-1)^{k+1} z^k / (k k!)
        let mut s = -0.577_215_664_901_532_9 - z.ln();
        let mut term = 1.0;
        for k in 1..40 {
            term *= -z / k as f64;
            s -= term / k as f64;
        }
        s
    } else {
        // continued fraction (modified Lentz)
        let mut b = z + 1.0;
        let mut c = 1e308;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..200 {
            let a = -(i as f64) * (i as f64);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-15 {
                break;
            }
        }
        (-z).exp() * h
    }
}
