//! Dense complex linear algebra for the Haar sampler: Householder QR,
//! a cyclic Jacobi eigensolver for Hermitian matrices, and an LU
//! determinant. Self-contained on purpose — the sampler needs exact
//! control over the phase conventions and no external solver.

use num_complex::Complex64;

/// Column-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(n);
        for j in 0..n {
            for i in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for j in 0..n {
            for k in 0..n {
                let b = rhs[(k, j)];
                if b.norm() == 0.0 {
                    continue;
                }
                for i in 0..n {
                    out[(i, j)] += self[(i, k)] * b;
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    /// `A v` for a column vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..n {
            let x = v[k];
            if x.norm() == 0.0 {
                continue;
            }
            for i in 0..n {
                out[i] += self[(i, k)] * x;
            }
        }
        out
    }

    /// Determinant via LU with partial pivoting.
    pub fn det(&self) -> Complex64 {
        let n = self.n;
        let mut m = self.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let mut piv = col;
            for r in col + 1..n {
                if m[(r, col)].norm() > m[(piv, col)].norm() {
                    piv = r;
                }
            }
            if m[(piv, col)].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if piv != col {
                for c in 0..n {
                    let tmp = m[(col, c)];
                    m[(col, c)] = m[(piv, c)];
                    m[(piv, c)] = tmp;
                }
                det = -det;
            }
            det *= m[(col, col)];
            for r in col + 1..n {
                let f = m[(r, col)] / m[(col, col)];
                for c in col..n {
                    let sub = f * m[(col, c)];
                    m[(r, c)] -= sub;
                }
            }
        }
        det
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[j * self.n + i]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[j * self.n + i]
    }
}

/// Householder QR. Returns `(Q, R)` with `A = Q R`.
pub fn qr(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.n;
    let mut r = a.clone();
    let mut q = CMatrix::identity(n);
    for k in 0..n {
        // Householder vector for column k below the diagonal
        let mut norm_x = 0.0f64;
        for i in k..n {
            norm_x += r[(i, k)].norm_sqr();
        }
        let norm_x = norm_x.sqrt();
        if norm_x < 1e-300 {
            continue;
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() > 1e-300 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * norm_x;
        let mut v: Vec<Complex64> = (k..n).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 < 1e-300 {
            continue;
        }
        // R <- (I - 2 v v*/|v|²) R ; Q <- Q (I - 2 v v*/|v|²)
        for j in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in k..n {
                dot += v[i - k].conj() * r[(i, j)];
            }
            let f = 2.0 * dot / vnorm2;
            for i in k..n {
                let sub = f * v[i - k];
                r[(i, j)] -= sub;
            }
        }
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for j in k..n {
                dot += q[(i, j)] * v[j - k];
            }
            let f = 2.0 * dot / vnorm2;
            for j in k..n {
                let sub = f * v[j - k].conj();
                q[(i, j)] -= sub;
            }
        }
    }
    (q, r)
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Returns eigenvalues (unsorted) and the unitary matrix of column
/// eigenvectors.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.n;
    let mut a = h.clone();
    let mut v = CMatrix::identity(n);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() < 1e-13 {
            break;
        }
        #[cfg(feature = "jacobi-debug")]
        eprintln!("sweep {_sweep}: off {:.3e}", off.sqrt());
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.norm() < 1e-300 {
                    continue;
                }
                // 2x2 Hermitian diagonalization: rotation (c, s·conj(phase))
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let abs_apq = apq.norm();
                let phase = apq / abs_apq;
                let tau = (aqq - app) / (2.0 * abs_apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // A <- U* A U with the plane rotation
                // U = [[c, -s·phase], [s·conj(phase), c]] on indices (p, q),
                // chosen to annihilate A[p,q] = |A[p,q]|·phase.
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = c * aip + s * phase.conj() * aiq;
                    a[(i, q)] = -s * phase * aip + c * aiq;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = c * apj + s * phase * aqj;
                    a[(q, j)] = -s * phase.conj() * apj + c * aqj;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = c * vip + s * phase.conj() * viq;
                    v[(i, q)] = -s * phase * vip + c * viq;
                }
            }
        }
    }
    let eigs: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    (eigs, v)
}
