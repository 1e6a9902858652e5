//! The unitary-group side: the ratios average `R(A,B;C,D)`, the
//! log-derivative average `J*(A;B)`, the assembled `n`-point correlation
//! `R_{N,n}`, the sine-kernel determinant oracle, and the numerical
//! residue checker for the simple pole of `J*`.
//!
//! `J*` is evaluated as a sum over subset pairs `(S,T)` of
//! `Q(S,T) · Σ_partitions Π H_{S,T}(W_r)`, where the partitions run over
//! singletons and mixed alpha–beta pairs and the `H` case table is built
//! from `z'/z` and `(z'/z)'`. The assembly
//! `R_{N,n} = Σ_{K+L+M} N^{|M|} J*(-iθ_K; iθ_L)` is a literal
//! transcription; the determinant `det S_N(θ_j - θ_k)` is the independent
//! oracle it is tested against.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::combinat::{
    enumerate_admissible_partitions, enumerate_subset_pairs, enumerate_tripartitions, Elem,
    PartitionBlock, ShiftSet, Side,
};
use crate::error::{Error, Result};
use crate::numerics::{sine_kernel, z_family};

/// Matrix dimension `N` of the unitary group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixSize(pub u32);

/// `n` distinct eigenangle arguments of the correlation density.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationPoint {
    pub thetas: Vec<f64>,
}

/// Pairwise shift separations below this are rejected as pole collisions;
/// near-collision studies perturb by `±δ` with `δ` above it and average.
pub const COLLISION_TOLERANCE: f64 = 1e-6;

/// Contour probe for numerical Laurent-coefficient extraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaurentProbe {
    pub radius: f64,
    pub nodes: usize,
}

impl Default for LaurentProbe {
    fn default() -> Self {
        LaurentProbe {
            radius: 1e-2,
            nodes: 64,
        }
    }
}

fn dist_mod_2pi_i(x: Complex64) -> f64 {
    let k = (x.im / TAU).round();
    Complex64::new(x.re, x.im - k * TAU).norm()
}

/// `z(x)` with pole collisions reported as such.
fn zv(x: Complex64) -> Result<Complex64> {
    match z_family(x) {
        Ok(f) => Ok(f.z),
        Err(Error::PoleAtZero(_)) => Err(Error::PoleCollision(format!(
            "z argument {x} within collision tolerance of a pole"
        ))),
        Err(e) => Err(e),
    }
}

fn zlog(x: Complex64) -> Result<Complex64> {
    Ok(z_family(x)
        .map_err(|_| Error::PoleCollision(format!("z'/z argument {x} at pole")))?
        .zlog)
}

fn zlog_prime(x: Complex64) -> Result<Complex64> {
    Ok(z_family(x)
        .map_err(|_| Error::PoleCollision(format!("(z'/z)' argument {x} at pole")))?
        .zlog_prime)
}

/// `Z(X,Y) = Π z(x + y)` over both sets.
fn big_z(xs: &[Complex64], ys: &[Complex64]) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for &x in xs {
        for &y in ys {
            acc *= zv(x + y)?;
        }
    }
    Ok(acc)
}

/// `Z†(X,Y)`: as `Z` but omitting factors whose argument vanishes (within
/// 1e-12 — the dagger rule is a literal zero test, not a closeness test).
fn big_z_dagger(xs: &[Complex64], ys: &[Complex64]) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for &x in xs {
        for &y in ys {
            if dist_mod_2pi_i(x + y) < 1e-12 {
                continue;
            }
            acc *= zv(x + y)?;
        }
    }
    Ok(acc)
}

/// The ratios average `R(A,B;C,D)` over `U(N)`:
/// `Σ_{S,T} e^{-N(ΣS + ΣT)} Z(S̄+T⁻, T̄+S⁻; C, D)`.
pub fn ratios_average(
    a: &ShiftSet,
    b: &ShiftSet,
    c: &ShiftSet,
    d: &ShiftSet,
    size: MatrixSize,
) -> Result<Complex64> {
    for g in c.values() {
        if g.re <= 0.0 {
            return Err(Error::SideConditionViolated("Re γ > 0 required for γ ∈ C"));
        }
    }
    for g in d.values() {
        if g.re <= 0.0 {
            return Err(Error::SideConditionViolated("Re δ > 0 required for δ ∈ D"));
        }
    }
    if c.len() > a.len() + size.0 as usize {
        return Err(Error::SideConditionViolated("|C| <= |A| + N required"));
    }
    if d.len() > b.len() + size.0 as usize {
        return Err(Error::SideConditionViolated("|D| <= |B| + N required"));
    }
    let n = size.0 as f64;
    let cv = c.values();
    let dv = d.values();
    let mut total = Complex64::new(0.0, 0.0);
    for asg in enumerate_subset_pairs(a, b) {
        let sv = asg.s_values(a);
        let tv = asg.t_values(b);
        let sum: Complex64 = sv.iter().sum::<Complex64>() + tv.iter().sum::<Complex64>();
        // first slot: S̄ + T⁻, second slot: T̄ + S⁻
        let mut left = asg.sbar_values(a);
        left.extend(tv.iter().map(|&t| -t));
        let mut right = asg.tbar_values(b);
        right.extend(sv.iter().map(|&s| -s));
        let z = big_z(&left, &right)? * big_z(&cv, &dv)?
            / (big_z(&left, &dv)? * big_z(&right, &cv)?);
        total += (-n * sum).exp() * z;
    }
    Ok(total)
}

/// The subset prefactor
/// `Q(S,T) = e^{-N(ΣS+ΣT)} Z(S,T) Z(S⁻,T⁻) / (Z†(S,S⁻) Z†(T,T⁻))`.
fn q_prefactor(sv: &[Complex64], tv: &[Complex64], n: f64) -> Result<Complex64> {
    let sum: Complex64 = sv.iter().sum::<Complex64>() + tv.iter().sum::<Complex64>();
    let sneg: Vec<Complex64> = sv.iter().map(|&s| -s).collect();
    let tneg: Vec<Complex64> = tv.iter().map(|&t| -t).collect();
    Ok((-n * sum).exp() * big_z(sv, tv)? * big_z(&sneg, &tneg)?
        / (big_z_dagger(sv, &sneg)? * big_z_dagger(tv, &tneg)?))
}

/// The `H_{S,T}` case table of the eigenvalue side.
fn h_case(sv: &[Complex64], tv: &[Complex64], w: &PartitionBlock) -> Result<Complex64> {
    let na = w.alphas().count();
    let nb = w.betas().count();
    match (w.len(), na, nb) {
        (1, 1, 0) => {
            let a = w.members[0].value;
            let mut acc = Complex64::new(0.0, 0.0);
            for &s in sv {
                acc += zlog(a - s)?;
            }
            for &t in tv {
                acc -= zlog(a + t)?;
            }
            Ok(acc)
        }
        (1, 0, 1) => {
            let b = w.members[0].value;
            let mut acc = Complex64::new(0.0, 0.0);
            for &t in tv {
                acc += zlog(b - t)?;
            }
            for &s in sv {
                acc -= zlog(b + s)?;
            }
            Ok(acc)
        }
        (2, 1, 1) => {
            let a = w.alphas().next().unwrap().value;
            let b = w.betas().next().unwrap().value;
            zlog_prime(a + b)
        }
        _ => Ok(Complex64::new(0.0, 0.0)),
    }
}

fn collision_guard(a: &ShiftSet, b: &ShiftSet) -> Result<()> {
    for x in a.iter() {
        for y in b.iter() {
            if dist_mod_2pi_i(x.value + y.value) < COLLISION_TOLERANCE {
                return Err(Error::PoleCollision(format!(
                    "α = {} against β = {} hits the simple pole α = -β",
                    x.value, y.value
                )));
            }
        }
    }
    for (set, name) in [(a, "A"), (b, "B")] {
        for (i, x) in set.iter().enumerate() {
            for y in set.iter().skip(i + 1) {
                if dist_mod_2pi_i(x.value - y.value) < COLLISION_TOLERANCE {
                    return Err(Error::PoleCollision(format!(
                        "equal shifts {} within {name}; perturb by ±δ and average",
                        x.value
                    )));
                }
            }
        }
    }
    Ok(())
}

/// The average of products of logarithmic derivatives, as the explicit
/// subset/partition sum `J*(A;B)`.
pub fn jstar(a: &ShiftSet, b: &ShiftSet, size: MatrixSize) -> Result<Complex64> {
    collision_guard(a, b)?;
    let n = size.0 as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for asg in enumerate_subset_pairs(a, b) {
        let sv = asg.s_values(a);
        let tv = asg.t_values(b);
        let sbar: Vec<Elem> = asg
            .sbar
            .iter()
            .map(|&i| Elem {
                side: Side::Alpha,
                label: a.get(i).label,
                value: a.get(i).value,
            })
            .collect();
        let tbar: Vec<Elem> = asg
            .tbar
            .iter()
            .map(|&i| Elem {
                side: Side::Beta,
                label: b.get(i).label,
                value: b.get(i).value,
            })
            .collect();
        let mut part_sum = Complex64::new(0.0, 0.0);
        for partition in enumerate_admissible_partitions(&sbar, &tbar) {
            let mut prod = Complex64::new(1.0, 0.0);
            for block in &partition.blocks {
                prod *= h_case(&sv, &tv, block)?;
                if prod.norm() == 0.0 {
                    break;
                }
            }
            part_sum += prod;
        }
        if part_sum.norm() > 0.0 {
            total += q_prefactor(&sv, &tv, n)? * part_sum;
        }
    }
    Ok(total)
}

/// Sine-kernel determinant `det_{n×n} S_N(θ_j - θ_k)` by pivoted
/// elimination — the independent oracle for [`correlation_rmt`].
pub fn determinant_oracle(points: &CorrelationPoint, size: MatrixSize) -> f64 {
    let n = points.thetas.len();
    let mut m = vec![0.0f64; n * n];
    for j in 0..n {
        for k in 0..n {
            m[j * n + k] = sine_kernel(size.0, points.thetas[j] - points.thetas[k]);
        }
    }
    // LU with partial pivoting
    let mut det = 1.0f64;
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if m[r * n + col].abs() > m[piv * n + col].abs() {
                piv = r;
            }
        }
        if m[piv * n + col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            for c in 0..n {
                m.swap(col * n + c, piv * n + c);
            }
            det = -det;
        }
        det *= m[col * n + col];
        for r in col + 1..n {
            let f = m[r * n + col] / m[col * n + col];
            for c in col..n {
                m[r * n + c] -= f * m[col * n + c];
            }
        }
    }
    det
}

/// Assemble the `n`-point correlation density
/// `R_{N,n}(θ) = Σ_{K+L+M} N^{|M|} J*(-iθ_K; iθ_L)`.
///
/// The result is projected to its real part after asserting the imaginary
/// residue is below `1e-8` of the magnitude.
pub fn correlation_rmt(points: &CorrelationPoint, size: MatrixSize) -> Result<f64> {
    let n = points.thetas.len();
    if n == 0 || n > 6 {
        return Err(Error::TooLarge("correlation order must be 1..=6"));
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = points.thetas[i] - points.thetas[j];
            let wrapped = (d - TAU * (d / TAU).round()).abs();
            if wrapped < COLLISION_TOLERANCE {
                return Err(Error::PoleCollision(format!(
                    "angles {i} and {j} collide (separation {wrapped:.2e})"
                )));
            }
        }
    }
    let nf = size.0 as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for tri in enumerate_tripartitions(n)? {
        // J*(A;∅) = 0 for nonempty A (and symmetrically), so skip those.
        if tri.k.is_empty() != tri.l.is_empty() {
            continue;
        }
        let avals: Vec<Complex64> = tri
            .k
            .iter()
            .map(|&i| Complex64::new(0.0, -points.thetas[i]))
            .collect();
        let bvals: Vec<Complex64> = tri
            .l
            .iter()
            .map(|&i| Complex64::new(0.0, points.thetas[i]))
            .collect();
        let j = jstar(
            &ShiftSet::alphas(&avals),
            &ShiftSet::betas(&bvals),
            size,
        )?;
        total += nf.powi(tri.m.len() as i32) * j;
    }
    if total.im.abs() > 1e-8 * total.norm().max(1.0) {
        return Err(Error::ImaginaryResidue(total.im.abs()));
    }
    Ok(total.re)
}

/// Numerically extracted residue of `J*(A;B)` at `α* = -β*` versus the
/// three-term identity `N·J*(A';B') + J*(A';B) + J*(A'+{-β*};B')`.
#[derive(Debug, Clone, Copy)]
pub struct ResidueReport {
    /// contour-extracted residue (coefficient of `1/(α*+β*)`)
    pub lhs: Complex64,
    /// the three-term right-hand side
    pub rhs: Complex64,
    /// extracted coefficient of `1/(α*+β*)²` (should be ~0: simple pole)
    pub double_pole: Complex64,
}

/// Extract the Laurent coefficients of `f` around `center` on a circle.
fn contour_coeffs<F>(center: Complex64, radius: f64, nodes: usize, f: F) -> Result<(Complex64, Complex64)>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut c_m1 = Complex64::new(0.0, 0.0);
    let mut c_m2 = Complex64::new(0.0, 0.0);
    for k in 0..nodes {
        let phi = TAU * k as f64 / nodes as f64;
        let e = Complex64::new(0.0, phi).exp();
        let v = f(center + radius * e)?;
        c_m1 += v * radius * e;
        c_m2 += v * radius * radius * e * e;
    }
    Ok((c_m1 / nodes as f64, c_m2 / nodes as f64))
}

/// Check the residue identity at the pole `α* = -β*`, with `α* = A[star_a]`
/// and `β* = B[star_b]`.
pub fn residue_check(
    a: &ShiftSet,
    b: &ShiftSet,
    star_a: usize,
    star_b: usize,
    size: MatrixSize,
    probe: &LaurentProbe,
) -> Result<ResidueReport> {
    let beta_star = b.get(star_b).value;
    let center = -beta_star;
    let eval = |alpha_star: Complex64| -> Result<Complex64> {
        let vals: Vec<Complex64> = a
            .iter()
            .enumerate()
            .map(|(i, s)| if i == star_a { alpha_star } else { s.value })
            .collect();
        jstar(&ShiftSet::alphas(&vals), b, size)
    };
    let (res, dbl) = contour_coeffs(center, probe.radius, probe.nodes, eval)?;
    // isolation check: the residue re-extracted at half radius must agree
    let (res_half, _) = contour_coeffs(center, probe.radius / 2.0, probe.nodes, eval)?;
    if (res - res_half).norm() > 1e-6 * res.norm().max(1.0) {
        return Err(Error::ProbeNotIsolated);
    }

    let a_rest: Vec<Complex64> = a
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != star_a)
        .map(|(_, s)| s.value)
        .collect();
    let b_rest: Vec<Complex64> = b
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != star_b)
        .map(|(_, s)| s.value)
        .collect();
    let a_prime = ShiftSet::alphas(&a_rest);
    let b_prime = ShiftSet::betas(&b_rest);
    let mut a_ext = a_rest.clone();
    a_ext.push(-beta_star);
    let rhs = size.0 as f64 * jstar(&a_prime, &b_prime, size)?
        + jstar(&a_prime, b, size)?
        + jstar(&ShiftSet::alphas(&a_ext), &b_prime, size)?;
    Ok(ResidueReport {
        lhs: res,
        rhs,
        double_pole: dbl,
    })
}
