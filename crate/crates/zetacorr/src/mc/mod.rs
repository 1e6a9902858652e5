//! Monte Carlo ground truth: Haar-distributed unitary matrices, their
//! eigenangles, and sample averages of correlation sums and
//! characteristic-polynomial ratios, with batch-means standard errors.
//!
//! Sampling follows the Ginibre + QR construction with the diagonal phase
//! correction that makes the distribution exactly Haar. Eigenangles come
//! from an in-module Hermitian reduction: for a random unit complex `ω`,
//! the matrix `ωU + ω̄U*` is Hermitian and commutes with `U`, so its
//! nondegenerate eigenvectors are eigenvectors of `U`; the Rayleigh
//! quotients `v*Uv` then land on the unit circle. Residuals are checked
//! and the (probability-zero) degenerate draws are retried with fresh `ω`.

pub mod linalg;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::combinat::enumerate_set_partitions;
use crate::combinat::{Elem, Side};
use crate::error::{Error, Result};
use crate::rmt::MatrixSize;

use linalg::{hermitian_eigen, qr, CMatrix};

use std::f64::consts::TAU;

/// Reproducible random source: equal `(seed, stream_id)` replays the same
/// samples; distinct stream ids are independent ChaCha streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Sorted eigenangles of one sampled matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenAngleSample {
    pub n: MatrixSize,
    pub angles: Vec<f64>,
}

/// A Monte Carlo estimate with its batch-means standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateWithError {
    pub mean: Complex64,
    pub std_error: f64,
    pub samples: usize,
}

fn sample_ginibre(n: usize, rng: &mut ChaCha12Rng) -> CMatrix {
    CMatrix::from_fn(n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            / std::f64::consts::SQRT_2
    })
}

/// A Haar-distributed unitary matrix: Ginibre sample, QR, then normalize
/// the `R` diagonal phases.
fn sample_haar_unitary(n: usize, rng: &mut ChaCha12Rng) -> CMatrix {
    let g = sample_ginibre(n, rng);
    let (q, r) = qr(&g);
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    u
}

fn wrap_to_two_pi(x: f64) -> f64 {
    let mut y = x % TAU;
    if y < 0.0 {
        y += TAU;
    }
    y
}

/// Eigenangles of a Haar sample, sorted ascending in `[0, 2π)`.
///
/// The angle sum is consistent with `arg det U` to 1e-8 by construction;
/// this is asserted per sample.
pub fn sample_haar_eigenangles(size: MatrixSize, stream: RngStream) -> Result<EigenAngleSample> {
    if size.0 > 64 {
        return Err(Error::GuardExceeded("matrix size guarded at N <= 64"));
    }
    let n = size.0 as usize;
    let mut rng = stream.rng();
    let u = sample_haar_unitary(n, &mut rng);
    let angles = eigenangles_of_unitary(&u, &mut rng)?;
    Ok(EigenAngleSample { n: size, angles })
}

fn eigenangles_of_unitary(u: &CMatrix, rng: &mut ChaCha12Rng) -> Result<Vec<f64>> {
    let n = u.n;
    let uadj = u.adjoint();
    'attempt: for _ in 0..8 {
        let phi: f64 = rng.gen::<f64>() * TAU;
        let omega = Complex64::new(phi.cos(), phi.sin());
        let mut h = CMatrix::zeros(n);
        for j in 0..n {
            for i in 0..n {
                h[(i, j)] = omega * u[(i, j)] + omega.conj() * uadj[(i, j)];
            }
        }
        let (_, v) = hermitian_eigen(&h);
        let mut angles = Vec::with_capacity(n);
        for k in 0..n {
            let col: Vec<Complex64> = (0..n).map(|i| v[(i, k)]).collect();
            let uv = u.apply(&col);
            // Rayleigh quotient; residual large => degenerate H_ω, retry.
            let mut lambda = Complex64::new(0.0, 0.0);
            for i in 0..n {
                lambda += col[i].conj() * uv[i];
            }
            let mut resid = 0.0f64;
            for i in 0..n {
                resid += (uv[i] - lambda * col[i]).norm_sqr();
            }
            if resid.sqrt() > 1e-8 || (lambda.norm() - 1.0).abs() > 1e-8 {
                continue 'attempt;
            }
            angles.push(wrap_to_two_pi(lambda.arg()));
        }
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // consistency: Σθ ≡ arg det U (mod 2π)
        let det_arg = u.det().arg();
        let sum: f64 = angles.iter().sum();
        let mismatch = (sum - det_arg) / TAU;
        if (mismatch - mismatch.round()).abs() * TAU > 1e-8 {
            continue 'attempt;
        }
        return Ok(angles);
    }
    Err(Error::InvalidConfig(
        "eigenangle extraction failed to converge after 8 retries".into(),
    ))
}

/// A trigonometric polynomial `f(θ₁..θₙ) = Σ c_k e^{i k·θ}` used as the
/// correlation test function (finite Fourier modes keep the population
/// integrals exact).
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    /// (mode vector, coefficient) pairs; mode length fixes the arity.
    pub modes: Vec<(Vec<i64>, Complex64)>,
}

impl TrigPoly {
    pub fn arity(&self) -> usize {
        self.modes.first().map_or(0, |(k, _)| k.len())
    }

    pub fn eval(&self, thetas: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in &self.modes {
            let phase: f64 = k
                .iter()
                .zip(thetas)
                .map(|(&ki, &ti)| ki as f64 * ti)
                .sum();
            acc += c * Complex64::new(0.0, phase).exp();
        }
        acc
    }
}

/// Distinct-index sum `Σ* f(θ_{j1},..,θ_{jn})` over one sample's angles,
/// evaluated through power sums and the partition (inclusion–exclusion)
/// identity rather than an `N^n` loop.
pub fn distinct_index_sum(f: &TrigPoly, angles: &[f64]) -> Complex64 {
    let n = f.arity();
    let elems: Vec<Elem> = (0..n)
        .map(|i| Elem {
            side: Side::Alpha,
            label: i as u32,
            value: Complex64::new(0.0, 0.0),
        })
        .collect();
    let partitions = enumerate_set_partitions(&elems).expect("arity guarded");
    let mut total = Complex64::new(0.0, 0.0);
    for (k, c) in &f.modes {
        let power_sum = |mode: i64| -> Complex64 {
            angles
                .iter()
                .map(|&t| Complex64::new(0.0, mode as f64 * t).exp())
                .sum()
        };
        let mut mode_total = Complex64::new(0.0, 0.0);
        for p in &partitions {
            let mut prod = Complex64::new(1.0, 0.0);
            for block in &p.blocks {
                let combined: i64 = block.members.iter().map(|e| k[e.label as usize]).sum();
                let sign = if (block.len() - 1) % 2 == 0 { 1.0 } else { -1.0 };
                let mut fact = 1.0;
                for i in 1..block.len() {
                    fact *= i as f64;
                }
                prod *= sign * fact * power_sum(combined);
            }
            mode_total += prod;
        }
        total += c * mode_total;
    }
    total
}

fn batch_means(values: &[Complex64]) -> EstimateWithError {
    let n = values.len();
    let mean = values.iter().sum::<Complex64>() / n as f64;
    let k = 16.min(n.max(1));
    let batch = n / k;
    let mut batch_means = Vec::with_capacity(k);
    for b in 0..k {
        let slice = &values[b * batch..(b + 1) * batch];
        batch_means.push(slice.iter().sum::<Complex64>() / slice.len() as f64);
    }
    let bm = batch_means.iter().sum::<Complex64>() / k as f64;
    let var: f64 = batch_means.iter().map(|v| (v - bm).norm_sqr()).sum::<f64>() / (k as f64 - 1.0);
    EstimateWithError {
        mean,
        std_error: (var / k as f64).sqrt(),
        samples: n,
    }
}

/// Monte Carlo estimate of the averaged distinct-index correlation sum
/// against `f`, over `samples` Haar matrices.
pub fn estimate_correlation(
    size: MatrixSize,
    f: &TrigPoly,
    samples: usize,
    stream: RngStream,
) -> Result<EstimateWithError> {
    let n = f.arity();
    if !(1..=4).contains(&n) {
        return Err(Error::TooLarge("correlation arity guarded at 1..=4"));
    }
    let values: Vec<Complex64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = sample_haar_eigenangles(
                size,
                RngStream::new(stream.seed, stream.stream_id.wrapping_add(i as u64)),
            )?;
            Ok(distinct_index_sum(f, &s.angles))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(batch_means(&values))
}

/// `Λ_X(s) = Π (1 - s e^{-iθ_k})`.
pub fn char_poly(s: Complex64, angles: &[f64]) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for &t in angles {
        acc *= 1.0 - s * Complex64::new(0.0, -t).exp();
    }
    acc
}

/// `Λ'/Λ(s) = Σ -e^{-iθ_k} / (1 - s e^{-iθ_k})`.
pub fn char_poly_logderiv(s: Complex64, angles: &[f64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &t in angles {
        let e = Complex64::new(0.0, -t).exp();
        acc += -e / (1.0 - s * e);
    }
    acc
}

/// Residual of the functional-equation identity
/// `s Λ'/Λ(s) + (1/s) Λ*'/Λ*(1/s) - N` for one sample at `s`.
pub fn fe_identity_residual(s: Complex64, sample: &EigenAngleSample) -> f64 {
    let neg: Vec<f64> = sample.angles.iter().map(|&t| -t).collect();
    let lhs = s * char_poly_logderiv(s, &sample.angles)
        + char_poly_logderiv(1.0 / s, &neg) / s;
    (lhs - sample.n.0 as f64).norm()
}

/// Monte Carlo estimate of the ratios average
/// `⟨ Π Λ_X(e^{-α}) Π Λ_X*(e^{-β}) / (Π Λ_X(e^{-γ}) Π Λ_X*(e^{-δ})) ⟩`.
pub fn estimate_ratio_average(
    a: &[Complex64],
    b: &[Complex64],
    c: &[Complex64],
    d: &[Complex64],
    size: MatrixSize,
    samples: usize,
    stream: RngStream,
) -> Result<EstimateWithError> {
    for g in c.iter().chain(d) {
        if g.re <= 0.0 {
            return Err(Error::SideConditionViolated(
                "Re γ, Re δ > 0 required for denominator shifts",
            ));
        }
    }
    let values: Vec<Complex64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let sample = sample_haar_eigenangles(
                size,
                RngStream::new(stream.seed, stream.stream_id.wrapping_add(i as u64)),
            )?;
            let neg: Vec<f64> = sample.angles.iter().map(|&t| -t).collect();
            let mut v = Complex64::new(1.0, 0.0);
            for &al in a {
                v *= char_poly((-al).exp(), &sample.angles);
            }
            for &be in b {
                v *= char_poly((-be).exp(), &neg);
            }
            for &ga in c {
                v /= char_poly((-ga).exp(), &sample.angles);
            }
            for &de in d {
                v /= char_poly((-de).exp(), &neg);
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(batch_means(&values))
}

/// Two-sided Kolmogorov–Smirnov statistic against the uniform CDF on
/// `[0, 2π)`.
pub fn ks_uniform_statistic(samples: &mut [f64]) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let cdf = x / TAU;
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((cdf - lo).abs()).max((hi - cdf).abs());
    }
    d
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_two_sample(xs: &mut [f64], ys: &mut [f64]) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let (n, m) = (xs.len(), ys.len());
    let mut i = 0;
    let mut j = 0;
    let mut d = 0.0f64;
    while i < n && j < m {
        if xs[i] <= ys[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    d
}
