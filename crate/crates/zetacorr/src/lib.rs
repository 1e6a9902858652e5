//! Explicit n-point correlations of unitary-matrix eigenvalues and of
//! Riemann zeros, with all arithmetic lower-order terms, together with the
//! independent oracles used to validate them: determinantal sine-kernel
//! identities, Monte Carlo averages over Haar-random matrices, and
//! empirical statistics of tabulated zeros.
//!
//! The two sides of the library mirror each other deliberately:
//!
//! * [`rmt`] evaluates the eigenvalue-side ratios average, the
//!   log-derivative average `J*`, and the assembled `n`-correlation
//!   `R_{N,n}`, checked against the sine-kernel determinant.
//! * [`zeta`] evaluates the zero-side analogue `J*_{ζ,t}` — both the
//!   general machinery (subset, partition and per-prime sums) and the
//!   closed forms for `n ≤ 4` — and assembles `R_{ζ,t,n}`.
//!
//! Supporting modules: [`numerics`] (scalar special functions),
//! [`primes`] (Euler products, prime sums and the per-prime theta
//! integrals), [`combinat`] (the enumeration engines), [`mc`] (Haar
//! sampling and Monte Carlo estimates), [`zeros`] (zero-table ingestion
//! and empirical statistics), and [`cli`] (the command front end).
//!
//! ```
//! use num_complex::Complex64;
//! use zetacorr::numerics::z_family;
//!
//! // z(ln 2) = 2, and z(x) + z(-x) = 1.
//! let x = Complex64::new(2.0_f64.ln(), 0.0);
//! let f = z_family(x).unwrap();
//! assert!((f.z - 2.0).norm() < 1e-14);
//! let g = z_family(-x).unwrap();
//! assert!((f.z + g.z - 1.0).norm() < 1e-14);
//! ```

pub mod cli;
pub mod combinat;
pub mod error;
pub mod mc;
pub mod numerics;
pub mod primes;
pub mod rmt;
pub mod zeros;
pub mod zeta;

mod guide;

pub use error::{Error, Result};
pub use numerics::ComplexValue;
