use num_complex::Complex64;
use zetacorr::mc::linalg::{hermitian_eigen, qr, CMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

fn main() {
    let n = 6usize;
    let mut rng = ChaCha12Rng::seed_from_u64(7);
    rng.set_stream(3);
    let g = CMatrix::from_fn(n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) / 2.0f64.sqrt()
    });
    let (q, r) = qr(&g);
    let mut u = q.clone();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = d / d.norm();
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    let uu = u.adjoint().mul(&u);
    let mut err = 0.0f64;
    for i in 0..n { for j in 0..n {
        let want = if i == j { 1.0 } else { 0.0 };
        err = err.max((uu[(i,j)] - Complex64::new(want, 0.0)).norm());
    }}
    println!("unitarity err {err:.3e}");
    let phi: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
    let omega = Complex64::new(phi.cos(), phi.sin());
    let uadj = u.adjoint();
    let mut h = CMatrix::zeros(n);
    for j in 0..n { for i in 0..n {
        h[(i, j)] = omega * u[(i, j)] + omega.conj() * uadj[(i, j)];
    }}
    let mut herr = 0.0f64;
    for i in 0..n { for j in 0..n {
        herr = herr.max((h[(i,j)] - h[(j,i)].conj()).norm());
    }}
    println!("hermiticity err {herr:.3e}");
    let (eigs, v) = hermitian_eigen(&h);
    for k in 0..n {
        let col: Vec<Complex64> = (0..n).map(|i| v[(i, k)]).collect();
        let hv = h.apply(&col);
        let mut resid = 0.0;
        for i in 0..n { resid += (hv[i] - eigs[k] * col[i]).norm_sqr(); }
        let uv = u.apply(&col);
        let mut lambda = Complex64::new(0.0, 0.0);
        for i in 0..n { lambda += col[i].conj() * uv[i]; }
        let mut uresid = 0.0;
        for i in 0..n { uresid += (uv[i] - lambda * col[i]).norm_sqr(); }
        println!("k={k} eig={:.4} Hresid={:.2e} |lambda|={:.8} Uresid={:.2e}", eigs[k], resid.sqrt(), lambda.norm(), uresid.sqrt());
    }
}
