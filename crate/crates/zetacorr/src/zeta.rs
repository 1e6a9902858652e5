//! The zero-side correlation machinery: the averaged log-derivative
//! `J*_{ζ,t}(A;B;U)` in both its general form (subset sum × per-prime
//! theta integrals × partition sum) and the closed forms for up to four
//! shifts, the assembled density `R_{ζ,t,n}`, the residue identity
//! checker, and the GUE scaling-limit reduction.
//!
//! The general engine is written against a small kernel trait so the
//! prime-free degeneration (`z`-kernel, `ℓ → N`) can be compared against
//! the independent eigenvalue-side implementation in [`crate::rmt`] —
//! the structural identity between the two sides is itself a tested
//! contract, not an implementation shortcut.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::combinat::{enumerate_subset_pairs, enumerate_tripartitions, ShiftSet};
use crate::error::{Error, Result};
use crate::numerics::{chi_logderiv, cpow, log_chi, z_family, ZetaEval};
use crate::primes::closed::{a_product, b1_sum, b2_sum, b3_sum, b4_sum, b_sum, q_sum};
use crate::primes::local::SubsetIntegrals;
use crate::primes::{PrimeContext, ThetaQuadrature};
use crate::rmt::{LaurentProbe, COLLISION_TOLERANCE};

/// Whether the functional-equation factor is evaluated exactly or through
/// its leading exponential approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XMode {
    /// `X_t(S,T)` as a product of `χ` values (needed by residue checks).
    ExactChi,
    /// `X_t(S,T) ≈ e^{-ℓ(ΣS + ΣT)}` and `-χ'/χ ≈ ℓ` with `ℓ = log(t/2π)`.
    EllApprox,
}

/// Height `t` on the critical line together with `ℓ = log(t/2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightContext {
    pub t: f64,
    pub ell: f64,
    pub x_mode: XMode,
}

impl HeightContext {
    pub fn new(t: f64, x_mode: XMode) -> Result<Self> {
        if !(t > TAU) {
            return Err(Error::InvalidConfig(format!(
                "height t must exceed 2π, got {t}"
            )));
        }
        Ok(HeightContext {
            t,
            ell: (t / TAU).ln(),
            x_mode,
        })
    }

    /// The evaluation point `s = 1/2 + it`.
    pub fn s(&self) -> Complex64 {
        Complex64::new(0.5, self.t)
    }
}

/// The functional-equation factor
/// `X_t(S,T) = Π_{ŝ∈S} χ(s+ŝ) Π_{t̂∈T} χ(1-s+t̂)`, or its exponential
/// approximation in [`XMode::EllApprox`]. Requires `|S| = |T|`.
pub fn x_factor(
    s_shifts: &[Complex64],
    t_shifts: &[Complex64],
    height: &HeightContext,
) -> Result<Complex64> {
    if s_shifts.len() != t_shifts.len() {
        return Err(Error::ArityMismatch("X_t requires |S| = |T|"));
    }
    let sum: Complex64 = s_shifts.iter().sum::<Complex64>() + t_shifts.iter().sum::<Complex64>();
    match height.x_mode {
        XMode::EllApprox => Ok((-height.ell * sum).exp()),
        XMode::ExactChi => {
            let s = height.s();
            let mut log = Complex64::new(0.0, 0.0);
            for &sh in s_shifts {
                log += log_chi(s + sh)?;
            }
            for &th in t_shifts {
                log += log_chi(1.0 - s + th)?;
            }
            Ok(log.exp())
        }
    }
}

/// Scalar functions the general engine is built from. Two implementations
/// exist: the zeta kernel and the prime-free `z`-kernel used to check the
/// structural degeneration onto the eigenvalue side.
pub trait JstarKernel {
    /// `ζ(1+x)` (zeta side) or `z(x)` (degeneration).
    fn zv(&self, x: Complex64) -> Result<Complex64>;
    /// `ζ'/ζ(1+x)` or `(z'/z)(x)`.
    fn logd(&self, x: Complex64) -> Result<Complex64>;
    /// `(ζ'/ζ)'(1+x)` or `(z'/z)'(x)`.
    fn logd_prime(&self, x: Complex64) -> Result<Complex64>;
    /// `X_t(S,T)` or `e^{-N(ΣS+ΣT)}`.
    fn subset_weight(&self, svals: &[Complex64], tvals: &[Complex64]) -> Result<Complex64>;
    /// One `-χ'/χ(s+μ)` factor (≈ `ℓ`), or `N`.
    fn u_factor(&self, mu: Complex64) -> Result<Complex64>;
    /// Prime sums/products to include, if any.
    fn prime_data(&self) -> Option<(&PrimeContext, &ThetaQuadrature)>;
}

/// The zeta-side kernel.
pub struct ZetaMachinery<'a> {
    pub height: HeightContext,
    pub primes: &'a PrimeContext,
    pub quad: ThetaQuadrature,
    pub zeta: ZetaEval,
}

impl JstarKernel for ZetaMachinery<'_> {
    fn zv(&self, x: Complex64) -> Result<Complex64> {
        self.zeta.z1(x)
    }
    fn logd(&self, x: Complex64) -> Result<Complex64> {
        self.zeta.logd1(x)
    }
    fn logd_prime(&self, x: Complex64) -> Result<Complex64> {
        self.zeta.logd1_prime(x)
    }
    fn subset_weight(&self, svals: &[Complex64], tvals: &[Complex64]) -> Result<Complex64> {
        x_factor(svals, tvals, &self.height)
    }
    fn u_factor(&self, mu: Complex64) -> Result<Complex64> {
        match self.height.x_mode {
            XMode::EllApprox => Ok(Complex64::new(self.height.ell, 0.0)),
            XMode::ExactChi => Ok(-chi_logderiv(self.height.s() + mu)?),
        }
    }
    fn prime_data(&self) -> Option<(&PrimeContext, &ThetaQuadrature)> {
        Some((self.primes, &self.quad))
    }
}

/// The prime-free degeneration: every arithmetic factor collapses to 1,
/// `ℓ` is replaced by `N`, and the scalar kernel becomes the `z` family.
pub struct RmtDegeneration {
    pub n: f64,
}

impl JstarKernel for RmtDegeneration {
    fn zv(&self, x: Complex64) -> Result<Complex64> {
        Ok(z_family(x)?.z)
    }
    fn logd(&self, x: Complex64) -> Result<Complex64> {
        Ok(z_family(x)?.zlog)
    }
    fn logd_prime(&self, x: Complex64) -> Result<Complex64> {
        Ok(z_family(x)?.zlog_prime)
    }
    fn subset_weight(&self, svals: &[Complex64], tvals: &[Complex64]) -> Result<Complex64> {
        let sum: Complex64 = svals.iter().sum::<Complex64>() + tvals.iter().sum::<Complex64>();
        Ok((-self.n * sum).exp())
    }
    fn u_factor(&self, _mu: Complex64) -> Result<Complex64> {
        Ok(Complex64::new(self.n, 0.0))
    }
    fn prime_data(&self) -> Option<(&PrimeContext, &ThetaQuadrature)> {
        None
    }
}

/// All set partitions of bit positions `0..m`, each block encoded as a
/// mask.
fn partitions_as_masks(m: usize) -> Vec<Vec<u32>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    fn rec(i: usize, m: usize, blocks: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == m {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] |= 1 << i;
            rec(i + 1, m, blocks, out);
            blocks[b] &= !(1 << i);
        }
        blocks.push(1 << i);
        rec(i + 1, m, blocks, out);
        blocks.pop();
    }
    let mut blocks = Vec::new();
    rec(0, m, &mut blocks, &mut out);
    out
}

/// Set partitions of an explicit list of bit positions, blocks as masks
/// over the original positions.
fn partitions_of_bits(bits: &[usize]) -> Vec<Vec<u32>> {
    partitions_as_masks(bits.len())
        .into_iter()
        .map(|blocks| {
            blocks
                .into_iter()
                .map(|bl| {
                    let mut mask = 0u32;
                    for (i, &pos) in bits.iter().enumerate() {
                        if bl >> i & 1 == 1 {
                            mask |= 1 << pos;
                        }
                    }
                    mask
                })
                .collect()
        })
        .collect()
}

fn collision_guard(avals: &[Complex64], bvals: &[Complex64]) -> Result<()> {
    for &a in avals {
        for &b in bvals {
            if (a + b).norm() < COLLISION_TOLERANCE {
                return Err(Error::PoleCollision(format!(
                    "shift {a} against {b} hits the simple pole α = -β"
                )));
            }
        }
    }
    for vals in [avals, bvals] {
        for (i, &x) in vals.iter().enumerate() {
            for &y in vals.iter().skip(i + 1) {
                if (x - y).norm() < COLLISION_TOLERANCE {
                    return Err(Error::PoleCollision(format!(
                        "equal shifts {x} within one side; perturb by ±δ and average"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// `Z(X,Y) = Π kernel.zv(x + y)`.
fn big_z<K: JstarKernel>(k: &K, xs: &[Complex64], ys: &[Complex64]) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for &x in xs {
        for &y in ys {
            acc *= k.zv(x + y)?;
        }
    }
    Ok(acc)
}

/// Dagger variant: factors with vanishing argument are omitted.
fn big_z_dagger<K: JstarKernel>(k: &K, xs: &[Complex64], ys: &[Complex64]) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for &x in xs {
        for &y in ys {
            if (x + y).norm() < 1e-12 {
                continue;
            }
            acc *= k.zv(x + y)?;
        }
    }
    Ok(acc)
}

/// The general log-derivative average
/// `J*(A;B;U) = Σ_{S,T} X(S,T) · Zζ-ratio · A_ζ(T⁻,S⁻;S,T)
///             · Σ_partitions Π H(W_r) · Π_{μ∈U} u(μ)`.
///
/// Element count `|A| + |B| + |U|` is guarded at 4 (the partition and
/// per-prime cost grows combinatorially past the quadruple shapes).
pub fn jstar_zeta_general<K: JstarKernel>(
    a: &ShiftSet,
    b: &ShiftSet,
    u: &[Complex64],
    kernel: &K,
) -> Result<Complex64> {
    if a.len() + b.len() + u.len() > 4 {
        return Err(Error::TooLarge(
            "general engine guarded at |A| + |B| + |U| <= 4",
        ));
    }
    let avals = a.values();
    let bvals = b.values();
    collision_guard(&avals, &bvals)?;

    let mut total = Complex64::new(0.0, 0.0);
    for asg in enumerate_subset_pairs(a, b) {
        let sv = asg.s_values(a);
        let tv = asg.t_values(b);
        let sbar = asg.sbar_values(a);
        let tbar = asg.tbar_values(b);
        let m = sbar.len() + tbar.len();
        let na = sbar.len();
        // element i is sbar[i] for i < na, else tbar[i - na]
        let elem_val = |i: usize| if i < na { sbar[i] } else { tbar[i - na] };

        let weight = kernel.subset_weight(&sv, &tv)?;
        let sneg: Vec<Complex64> = sv.iter().map(|&z| -z).collect();
        let tneg: Vec<Complex64> = tv.iter().map(|&z| -z).collect();
        let zratio = big_z(kernel, &sv, &tv)? * big_z(kernel, &sneg, &tneg)?
            / (big_z_dagger(kernel, &sv, &sneg)? * big_z_dagger(kernel, &tv, &tneg)?);

        // H(W) for every nonempty subset mask of the leftover elements:
        // the scalar case table, plus per-prime corrections when present.
        let nmasks = 1usize << m;
        let mut h_of = vec![Complex64::new(0.0, 0.0); nmasks];
        for (mask, slot) in h_of.iter_mut().enumerate().skip(1) {
            let bits: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            let n_alpha = bits.iter().filter(|&&i| i < na).count();
            let n_beta = bits.len() - n_alpha;
            *slot = match (bits.len(), n_alpha, n_beta) {
                (1, 1, 0) => {
                    let x = elem_val(bits[0]);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for &s in &sv {
                        acc += kernel.logd(x - s)?;
                    }
                    for &t in &tv {
                        acc -= kernel.logd(x + t)?;
                    }
                    acc
                }
                (1, 0, 1) => {
                    let x = elem_val(bits[0]);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for &t in &tv {
                        acc += kernel.logd(x - t)?;
                    }
                    for &s in &sv {
                        acc -= kernel.logd(x + s)?;
                    }
                    acc
                }
                (2, 1, 1) => {
                    let x = elem_val(bits[0]) + elem_val(bits[1]);
                    kernel.logd_prime(x)?
                }
                _ => Complex64::new(0.0, 0.0),
            };
        }

        // Arithmetic factor and per-prime H corrections.
        let mut afactor = Complex64::new(1.0, 0.0);
        if let Some((primes, quad)) = kernel.prime_data() {
            let elems: Vec<crate::combinat::Elem> = (0..m)
                .map(|i| crate::combinat::Elem {
                    side: if i < na {
                        crate::combinat::Side::Alpha
                    } else {
                        crate::combinat::Side::Beta
                    },
                    label: i as u32,
                    value: elem_val(i),
                })
                .collect();
            let mut local_factors = Vec::with_capacity(primes.primes().len());
            for &p in primes.primes() {
                let ints = SubsetIntegrals::new(p, &sv, &tv, &elems, quad)?;
                // Z_p(T⁻,S⁻;S,T) with Z_p(X,Y) = Π (1 - p^{-1-x-y})
                let zp = |xs: &[Complex64], ys: &[Complex64]| -> Complex64 {
                    let mut acc = Complex64::new(1.0, 0.0);
                    for &x in xs {
                        for &y in ys {
                            acc *= 1.0 - cpow(p as f64, -(1.0 + x + y));
                        }
                    }
                    acc
                };
                let zp_ratio = zp(&tneg, &sneg) * zp(&sv, &tv) / (zp(&tneg, &tv) * zp(&sneg, &sv));
                local_factors.push(zp_ratio * ints.i_empty);

                // c values for every nonempty subset, then the partition
                // sums: H_{p,2}(mask) = Σ_partitions (-1)^{J-1}(J-1)! Π c.
                let mut c_of = vec![Complex64::new(0.0, 0.0); nmasks];
                for (mask, slot) in c_of.iter_mut().enumerate().skip(1) {
                    *slot = ints.c_subset(mask as u32)?;
                }
                let lp = (p as f64).ln();
                let pf = p as f64;
                for mask in 1..nmasks {
                    let bits: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
                    let n_alpha = bits.iter().filter(|&&i| i < na).count();
                    let n_beta = bits.len() - n_alpha;
                    let zl = |x: Complex64| -lp / (cpow(pf, x + 1.0) - 1.0);
                    let h_p1 = match (bits.len(), n_alpha, n_beta) {
                        (1, 1, 0) => {
                            let x = elem_val(bits[0]);
                            let mut acc = Complex64::new(0.0, 0.0);
                            for &s in &sv {
                                acc += zl(x - s);
                            }
                            for &t in &tv {
                                acc -= zl(x + t);
                            }
                            acc
                        }
                        (1, 0, 1) => {
                            let x = elem_val(bits[0]);
                            let mut acc = Complex64::new(0.0, 0.0);
                            for &t in &tv {
                                acc += zl(x - t);
                            }
                            for &s in &sv {
                                acc -= zl(x + s);
                            }
                            acc
                        }
                        (2, 1, 1) => {
                            let x = elem_val(bits[0]) + elem_val(bits[1]);
                            let w = cpow(pf, x + 1.0);
                            lp * lp * w / ((w - 1.0) * (w - 1.0))
                        }
                        _ => Complex64::new(0.0, 0.0),
                    };
                    // +H_{p,2} over partitions of the subset's bits
                    let mut h_p2 = Complex64::new(0.0, 0.0);
                    for blocks in partitions_of_bits(&bits) {
                        let j = blocks.len();
                        let sign = if (j - 1) % 2 == 0 { 1.0 } else { -1.0 };
                        let mut fact = 1.0;
                        for i in 1..j {
                            fact *= i as f64;
                        }
                        let mut prod = Complex64::new(sign * fact, 0.0);
                        for &bl in &blocks {
                            prod *= c_of[bl as usize];
                        }
                        h_p2 += prod;
                    }
                    h_of[mask] += -h_p1 + h_p2;
                }
            }
            afactor = primes.product_of_factors(&local_factors).value;
        }

        // Partition sum over all set partitions of the leftover elements.
        let mut psum = Complex64::new(0.0, 0.0);
        for blocks in partitions_as_masks(m) {
            let mut prod = Complex64::new(1.0, 0.0);
            for &bl in &blocks {
                prod *= h_of[bl as usize];
                if prod.norm() == 0.0 {
                    break;
                }
            }
            psum += prod;
        }
        total += weight * zratio * afactor * psum;
    }

    for &mu in u {
        total *= kernel.u_factor(mu)?;
    }
    Ok(total)
}

/// The closed-form shapes written out explicitly for `n ≤ 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedShape {
    /// `J*({a};{b})`
    Pair,
    /// `J*({a};{b1,b2})`
    Triple,
    /// `J*({a};{b1,b2,b3})`
    Quad13,
    /// `J*({a1,a2};{b1,b2})`
    Quad22,
}

/// Evaluation context shared by the closed forms.
#[derive(Clone, Copy)]
pub struct ClosedFormCtx<'a> {
    pub height: HeightContext,
    pub primes: &'a PrimeContext,
    pub zeta: ZetaEval,
}

impl<'a> ClosedFormCtx<'a> {
    pub fn new(height: HeightContext, primes: &'a PrimeContext, zeta: ZetaEval) -> Result<Self> {
        if height.x_mode != XMode::EllApprox {
            return Err(Error::InvalidConfig(
                "closed forms are the ℓ-approximation shapes; use EllApprox".into(),
            ));
        }
        Ok(ClosedFormCtx {
            height,
            primes,
            zeta,
        })
    }

    /// `P1(x) = e^{-ℓx} A(x) ζ(1+x) ζ(1-x)`
    pub fn p1(&self, x: Complex64) -> Result<Complex64> {
        let a = a_product(x, self.primes).value;
        Ok((-self.height.ell * x).exp() * a * self.zeta.z1(x)? * self.zeta.z1(-x)?)
    }

    /// `P2(x) = (ζ'/ζ)'(1+x) - B(x)`
    pub fn p2(&self, x: Complex64) -> Result<Complex64> {
        Ok(self.zeta.logd1_prime(x)? - b_sum(x, self.primes).value)
    }

    /// `P3(a,b,c) = B1(a+b, a+c) + ζ'/ζ(1+a+c) - ζ'/ζ(1+c-b)`
    pub fn p3(&self, a: Complex64, b: Complex64, c: Complex64) -> Result<Complex64> {
        Ok(b1_sum(a + b, a + c, self.primes).value + self.zeta.logd1(a + c)?
            - self.zeta.logd1(c - b)?)
    }

    fn w1(&self, a: Complex64, b1: Complex64, b2: Complex64, b3: Complex64) -> Result<Complex64> {
        Ok(self.p1(a + b1)?
            * (self.p3(a, b1, b2)? * self.p3(a, b1, b3)?
                - b2_sum(a, b1, b2, b3, self.primes).value))
    }

    fn w(&self, a1: Complex64, b1: Complex64, a2: Complex64, b2: Complex64) -> Result<Complex64> {
        Ok(self.p1(a1 + b1)?
            * (self.p2(a2 + b2)? - b3_sum(a1, a2, b1, b2, self.primes).value
                + self.p3(a1, b1, b2)? * self.p3(b1, a1, a2)?))
    }
}

/// Literal transcription of the explicit `J*` formulas.
pub fn jstar_zeta_closed(
    shape: ClosedShape,
    avals: &[Complex64],
    bvals: &[Complex64],
    ctx: &ClosedFormCtx,
) -> Result<Complex64> {
    collision_guard(avals, bvals)?;
    match shape {
        ClosedShape::Pair => {
            if avals.len() != 1 || bvals.len() != 1 {
                return Err(Error::ArityMismatch("pair shape takes ({a};{b})"));
            }
            let x = avals[0] + bvals[0];
            Ok(ctx.p1(x)? + ctx.p2(x)?)
        }
        ClosedShape::Triple => {
            if avals.len() != 1 || bvals.len() != 2 {
                return Err(Error::ArityMismatch("triple shape takes ({a};{b1,b2})"));
            }
            let (a, b1, b2) = (avals[0], bvals[0], bvals[1]);
            Ok(q_sum(a + b1, a + b2, ctx.primes).value
                - ctx.p1(a + b1)? * ctx.p3(a, b1, b2)?
                - ctx.p1(a + b2)? * ctx.p3(a, b2, b1)?)
        }
        ClosedShape::Quad13 => {
            if avals.len() != 1 || bvals.len() != 3 {
                return Err(Error::ArityMismatch("(1,3) shape takes ({a};{b1,b2,b3})"));
            }
            let (a, b1, b2, b3) = (avals[0], bvals[0], bvals[1], bvals[2]);
            let lead = ctx.primes.sum_over_primes(|p| {
                let pf = p as f64;
                let lp = pf.ln();
                let zp = |x: Complex64| 1.0 / (1.0 - cpow(pf, -x));
                -zp(1.0 + a + b1)
                    * zp(1.0 + a + b2)
                    * zp(1.0 + a + b3)
                    * lp.powi(4)
                    * cpow(pf, -(3.0 + 3.0 * a + b1 + b2 + b3))
            });
            Ok(lead.value
                + ctx.w1(a, b1, b2, b3)?
                + ctx.w1(a, b2, b1, b3)?
                + ctx.w1(a, b3, b1, b2)?)
        }
        ClosedShape::Quad22 => {
            if avals.len() != 2 || bvals.len() != 2 {
                return Err(Error::ArityMismatch("(2,2) shape takes ({a1,a2};{b1,b2})"));
            }
            let (a1, a2, b1, b2) = (avals[0], avals[1], bvals[0], bvals[1]);
            let z = &ctx.zeta;
            let swap = {
                let astar = crate::primes::closed::astar_product(a1, a2, b1, b2, ctx.primes)?.value;
                let num = z.z1(a1 + b1)?
                    * z.z1(a1 + b2)?
                    * z.z1(a2 + b1)?
                    * z.z1(a2 + b2)?
                    * z.z1(-(a1 + b1))?
                    * z.z1(-(a1 + b2))?
                    * z.z1(-(a2 + b1))?
                    * z.z1(-(a2 + b2))?;
                let den = z.z1(a1 - a2)? * z.z1(a2 - a1)? * z.z1(b1 - b2)? * z.z1(b2 - b1)?;
                (-ctx.height.ell * (a1 + a2 + b1 + b2)).exp() * astar * num / den
            };
            Ok(ctx.p2(a1 + b1)? * ctx.p2(a2 + b2)? + ctx.p2(a1 + b2)? * ctx.p2(a2 + b1)?
                - b4_sum(a1, a2, b1, b2, ctx.primes).value
                + swap
                + ctx.w(a1, b1, a2, b2)?
                + ctx.w(a1, b2, a2, b1)?
                + ctx.w(a2, b1, a1, b2)?
                + ctx.w(a2, b2, a1, b1)?)
        }
    }
}

/// Which evaluation route assembles the correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaEngine {
    ClosedForm,
    GeneralMachinery,
}

/// One `R_{ζ,t,n}` evaluation request.
pub struct ZetaCorrelationRequest<'a> {
    /// `n` ordinates (2 to 4 of them), pairwise distinct.
    pub points: Vec<f64>,
    pub height: HeightContext,
    pub primes: &'a PrimeContext,
    pub quad: ThetaQuadrature,
    pub engine: ZetaEngine,
    pub zeta: ZetaEval,
}

/// Assemble `R_{ζ,t,n}(x) = Σ_{K+L+M} Π_{m∈M} u · J*(-ix_K; ix_L)`.
///
/// Terms with exactly one of `K`, `L` empty vanish identically
/// (`J*(∅;B) = 0`) and are skipped; in the ℓ-approximation the `M`-factor
/// is `ℓ^{|M|}`.
pub fn correlation_zeta(req: &ZetaCorrelationRequest) -> Result<f64> {
    let n = req.points.len();
    if !(2..=4).contains(&n) {
        return Err(Error::InvalidConfig(format!(
            "zeta correlation supports n in 2..=4, got {n}"
        )));
    }
    for i in 0..n {
        for j in i + 1..n {
            if (req.points[i] - req.points[j]).abs() < COLLISION_TOLERANCE {
                return Err(Error::PoleCollision(format!(
                    "ordinates {i} and {j} collide"
                )));
            }
        }
    }
    if req.engine == ZetaEngine::ClosedForm && req.height.x_mode != XMode::EllApprox {
        return Err(Error::InvalidConfig(
            "closed-form engine requires the ℓ-approximation".into(),
        ));
    }

    let mut total = Complex64::new(0.0, 0.0);
    for tri in enumerate_tripartitions(n)? {
        if tri.k.is_empty() != tri.l.is_empty() {
            continue;
        }
        let avals: Vec<Complex64> = tri
            .k
            .iter()
            .map(|&i| Complex64::new(0.0, -req.points[i]))
            .collect();
        let bvals: Vec<Complex64> = tri
            .l
            .iter()
            .map(|&i| Complex64::new(0.0, req.points[i]))
            .collect();
        let uvals: Vec<Complex64> = tri
            .m
            .iter()
            .map(|&i| Complex64::new(0.0, req.points[i]))
            .collect();
        let term = match req.engine {
            ZetaEngine::GeneralMachinery => {
                let kernel = ZetaMachinery {
                    height: req.height,
                    primes: req.primes,
                    quad: req.quad,
                    zeta: req.zeta,
                };
                jstar_zeta_general(
                    &ShiftSet::alphas(&avals),
                    &ShiftSet::betas(&bvals),
                    &uvals,
                    &kernel,
                )?
            }
            ZetaEngine::ClosedForm => {
                let ctx = ClosedFormCtx::new(req.height, req.primes, req.zeta)?;
                let ell_pow = req.height.ell.powi(tri.m.len() as i32);
                // (|K|,|L|) shape dispatch, using the A↔B exchange symmetry
                // of the ℓ-approximation forms for the mirrored shapes.
                let j = match (avals.len(), bvals.len()) {
                    (0, 0) => Complex64::new(1.0, 0.0),
                    (1, 1) => jstar_zeta_closed(ClosedShape::Pair, &avals, &bvals, &ctx)?,
                    (1, 2) => jstar_zeta_closed(ClosedShape::Triple, &avals, &bvals, &ctx)?,
                    (2, 1) => jstar_zeta_closed(ClosedShape::Triple, &bvals, &avals, &ctx)?,
                    (1, 3) => jstar_zeta_closed(ClosedShape::Quad13, &avals, &bvals, &ctx)?,
                    (3, 1) => jstar_zeta_closed(ClosedShape::Quad13, &bvals, &avals, &ctx)?,
                    (2, 2) => jstar_zeta_closed(ClosedShape::Quad22, &avals, &bvals, &ctx)?,
                    other => {
                        return Err(Error::InvalidConfig(format!(
                            "no closed form for subset shape {other:?}"
                        )))
                    }
                };
                ell_pow * j
            }
        };
        total += term;
    }
    if total.im.abs() > 1e-8 * total.norm().max(1.0) {
        return Err(Error::ImaginaryResidue(total.im.abs()));
    }
    Ok(total.re)
}

/// Pair-correlation density at gap `x` (difference of the two ordinates),
/// in the ℓ-approximation: `ℓ² + J*(ix) + J*(-ix)` with the closed pair
/// form. This is the function compared against zero tables and the GUE
/// limit.
pub fn pair_density(gap: f64, ctx: &ClosedFormCtx) -> Result<f64> {
    let x = Complex64::new(0.0, gap);
    let plus = ctx.p1(x)? + ctx.p2(x)?;
    let minus = ctx.p1(-x)? + ctx.p2(-x)?;
    Ok(ctx.height.ell * ctx.height.ell + (plus + minus).re)
}

/// `1 - (sin πr / πr)²`: the scaled sine-kernel (GUE) pair limit.
pub fn gue_pair_limit(r: f64) -> f64 {
    if r.abs() < 1e-12 {
        return 0.0;
    }
    let s = (PI * r).sin() / (PI * r);
    1.0 - s * s
}

/// `(1/ℓ²) R_{ζ,t,2}(u, u + 2πr/ℓ)`: the pair correlation at `r` mean
/// spacings, which approaches [`gue_pair_limit`] as `ℓ` grows.
pub fn scaled_pair_correlation(r: f64, ctx: &ClosedFormCtx) -> Result<f64> {
    let ell = ctx.height.ell;
    let gap = TAU * r / ell;
    Ok(pair_density(gap, ctx)? / (ell * ell))
}

/// Residue report for the zeta-side identity (exact-χ mode).
#[derive(Debug, Clone, Copy)]
pub struct ZetaResidueReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub double_pole: Complex64,
}

/// Contour-extract the residue of `J*_{ζ,t}(A;B;U)` at `α* = -β*` and
/// compare with
/// `-χ'/χ(s-β*) J*(A';B';U) + J*(A';B;U) + J*(A'+{-β*};B';U)`.
pub fn residue_check_zeta(
    a: &ShiftSet,
    b: &ShiftSet,
    u: &[Complex64],
    star_a: usize,
    star_b: usize,
    kernel: &ZetaMachinery,
    probe: &LaurentProbe,
) -> Result<ZetaResidueReport> {
    if kernel.height.x_mode != XMode::ExactChi {
        return Err(Error::InvalidConfig(
            "the residue identity needs exact χ'/χ; use ExactChi".into(),
        ));
    }
    let beta_star = b.get(star_b).value;
    let center = -beta_star;
    let eval = |alpha_star: Complex64| -> Result<Complex64> {
        let vals: Vec<Complex64> = a
            .iter()
            .enumerate()
            .map(|(i, s)| if i == star_a { alpha_star } else { s.value })
            .collect();
        jstar_zeta_general(&ShiftSet::alphas(&vals), b, u, kernel)
    };
    let mut c_m1 = Complex64::new(0.0, 0.0);
    let mut c_m2 = Complex64::new(0.0, 0.0);
    let mut c_m1_half = Complex64::new(0.0, 0.0);
    for k in 0..probe.nodes {
        let phi = TAU * k as f64 / probe.nodes as f64;
        let e = Complex64::new(0.0, phi).exp();
        let v = eval(center + probe.radius * e)?;
        c_m1 += v * probe.radius * e;
        c_m2 += v * probe.radius * probe.radius * e * e;
        let vh = eval(center + probe.radius / 2.0 * e)?;
        c_m1_half += vh * probe.radius / 2.0 * e;
    }
    c_m1 /= probe.nodes as f64;
    c_m2 /= probe.nodes as f64;
    c_m1_half /= probe.nodes as f64;
    if (c_m1 - c_m1_half).norm() > 1e-5 * c_m1.norm().max(1.0) {
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
    let chi_term = -chi_logderiv(kernel.height.s() - beta_star)?;
    let rhs = chi_term * jstar_zeta_general(&a_prime, &b_prime, u, kernel)?
        + jstar_zeta_general(&a_prime, b, u, kernel)?
        + jstar_zeta_general(&ShiftSet::alphas(&a_ext), &b_prime, u, kernel)?;
    Ok(ZetaResidueReport {
        lhs: c_m1,
        rhs,
        double_pole: c_m2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::TailPolicy;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn primes101() -> PrimeContext {
        PrimeContext::with_policy(101, TailPolicy::None).unwrap()
    }

    fn machinery(primes: &PrimeContext, mode: XMode, t: f64) -> ZetaMachinery<'_> {
        ZetaMachinery {
            height: HeightContext::new(t, mode).unwrap(),
            primes,
            quad: ThetaQuadrature::default(),
            zeta: ZetaEval::default(),
        }
    }

    #[test]
    fn x_factor_cases() {
        let h = HeightContext::new(1e6, XMode::ExactChi).unwrap();
        assert!((x_factor(&[], &[], &h).unwrap() - 1.0).norm() < 1e-15);
        // ŝ = -t̂ gives χ(s+ŝ)χ(1-s-ŝ) = 1 exactly
        let sh = c(0.03, 0.01);
        let v = x_factor(&[sh], &[-sh], &h).unwrap();
        assert!((v - 1.0).norm() < 1e-9, "{v}");
        // exact vs ℓ-approximation: relative gap O(1/t)
        let ha = HeightContext::new(1e6, XMode::EllApprox).unwrap();
        let shifts = ([c(0.02, 0.05)], [c(0.04, -0.03)]);
        let exact = x_factor(&shifts.0, &shifts.1, &h).unwrap();
        let approx = x_factor(&shifts.0, &shifts.1, &ha).unwrap();
        assert!(
            (exact - approx).norm() / approx.norm() < 1e-4,
            "gap {}",
            (exact - approx).norm() / approx.norm()
        );
    }

    #[test]
    fn jstar_general_empty_and_one_sided() {
        let primes = primes101();
        let k = machinery(&primes, XMode::EllApprox, 1e6);
        let e = ShiftSet::alphas(&[]);
        let eb = ShiftSet::betas(&[]);
        let one = jstar_zeta_general(&e, &eb, &[], &k).unwrap();
        assert!((one - 1.0).norm() < 1e-12);
        let b = ShiftSet::betas(&[c(0.05, 0.1)]);
        let zero = jstar_zeta_general(&e, &b, &[], &k).unwrap();
        assert!(zero.norm() < 1e-12);
    }

    #[test]
    fn pair_engines_agree() {
        let primes = primes101();
        let k = machinery(&primes, XMode::EllApprox, 1e6);
        let ctx = ClosedFormCtx::new(k.height, &primes, k.zeta).unwrap();
        let a = c(0.04, 0.09);
        let b = c(0.07, -0.06);
        let general =
            jstar_zeta_general(&ShiftSet::alphas(&[a]), &ShiftSet::betas(&[b]), &[], &k).unwrap();
        let closed = jstar_zeta_closed(ClosedShape::Pair, &[a], &[b], &ctx).unwrap();
        assert!(
            (general - closed).norm() <= 1e-6 * closed.norm().max(1.0),
            "general {general} vs closed {closed}"
        );
    }

    #[test]
    fn triple_engines_agree_both_orientations() {
        let primes = primes101();
        let k = machinery(&primes, XMode::EllApprox, 1e6);
        let ctx = ClosedFormCtx::new(k.height, &primes, k.zeta).unwrap();
        let a = c(0.03, 0.11);
        let b1 = c(0.06, -0.04);
        let b2 = c(-0.02, 0.08);
        let general = jstar_zeta_general(
            &ShiftSet::alphas(&[a]),
            &ShiftSet::betas(&[b1, b2]),
            &[],
            &k,
        )
        .unwrap();
        let closed = jstar_zeta_closed(ClosedShape::Triple, &[a], &[b1, b2], &ctx).unwrap();
        assert!(
            (general - closed).norm() <= 1e-6 * closed.norm().max(1.0),
            "general {general} vs closed {closed}"
        );
        // mirrored shape via the exchange symmetry
        let general_m = jstar_zeta_general(
            &ShiftSet::alphas(&[b1, b2]),
            &ShiftSet::betas(&[a]),
            &[],
            &k,
        )
        .unwrap();
        assert!(
            (general_m - closed).norm() <= 1e-6 * closed.norm().max(1.0),
            "mirror {general_m} vs closed {closed}"
        );
    }

    #[test]
    fn rmt_degeneration_matches_rmt_jstar() {
        let kernel = RmtDegeneration { n: 7.0 };
        let a = [c(0.12, 0.31), c(0.05, -0.2)];
        let b = [c(0.07, 0.11)];
        let via_zeta =
            jstar_zeta_general(&ShiftSet::alphas(&a), &ShiftSet::betas(&b), &[], &kernel).unwrap();
        let via_rmt = crate::rmt::jstar(
            &ShiftSet::alphas(&a),
            &ShiftSet::betas(&b),
            crate::rmt::MatrixSize(7),
        )
        .unwrap();
        assert!(
            (via_zeta - via_rmt).norm() < 1e-10 * via_rmt.norm().max(1.0),
            "{via_zeta} vs {via_rmt}"
        );
    }

    #[test]
    fn correlation_term_count_n3() {
        // 27 tripartitions; those with exactly one of K, L empty drop out,
        // leaving 1 (ℓ³) + 6 (pair × ℓ) + 6 (triple) = 13 contributing terms.
        let tris = enumerate_tripartitions(3).unwrap();
        let contributing = tris
            .iter()
            .filter(|t| t.k.is_empty() == t.l.is_empty())
            .count();
        assert_eq!(contributing, 13);
        let by_m: Vec<usize> = (0..=3)
            .map(|m| {
                tris.iter()
                    .filter(|t| t.k.is_empty() == t.l.is_empty() && t.m.len() == m)
                    .count()
            })
            .collect();
        assert_eq!(by_m, vec![6, 6, 0, 1]);
    }

    #[test]
    fn pair_correlation_engines_agree() {
        let primes = primes101();
        let req = |engine| ZetaCorrelationRequest {
            points: vec![0.0, 0.8],
            height: HeightContext::new(1e6, XMode::EllApprox).unwrap(),
            primes: &primes,
            quad: ThetaQuadrature::default(),
            engine,
            zeta: ZetaEval::default(),
        };
        let closed = correlation_zeta(&req(ZetaEngine::ClosedForm)).unwrap();
        let general = correlation_zeta(&req(ZetaEngine::GeneralMachinery)).unwrap();
        assert!(
            (closed - general).abs() < 1e-6 * closed.abs().max(1.0),
            "{closed} vs {general}"
        );
    }

    #[test]
    fn scaled_pair_correlation_near_gue() {
        let primes = PrimeContext::with_policy(1009, TailPolicy::None).unwrap();
        let height = HeightContext::new(1e12, XMode::EllApprox).unwrap();
        let ctx = ClosedFormCtx::new(height, &primes, ZetaEval::default()).unwrap();
        for &r in &[0.3, 0.7, 1.0, 1.7, 2.5] {
            let got = scaled_pair_correlation(r, &ctx).unwrap();
            let gue = gue_pair_limit(r);
            assert!((got - gue).abs() < 0.02, "r = {r}: {got} vs GUE {gue}");
        }
    }

    #[test]
    fn residue_zeta_single_pair() {
        // |A| = |B| = 1: residue is -χ'/χ(s - β*) · J*(∅;∅) = -χ'/χ(s-β*).
        let primes = primes101();
        let k = machinery(&primes, XMode::ExactChi, 1e5);
        let b = c(0.08, 0.02);
        let rep = residue_check_zeta(
            &ShiftSet::alphas(&[c(0.1, 0.0)]),
            &ShiftSet::betas(&[b]),
            &[],
            0,
            0,
            &k,
            &LaurentProbe::default(),
        )
        .unwrap();
        let expect = -chi_logderiv(k.height.s() - b).unwrap();
        assert!(
            (rep.rhs - expect).norm() < 1e-12 * expect.norm(),
            "rhs {} vs {}",
            rep.rhs,
            expect
        );
        assert!(
            (rep.lhs - rep.rhs).norm() < 1e-5 * rep.rhs.norm(),
            "lhs {} rhs {}",
            rep.lhs,
            rep.rhs
        );
        assert!(rep.double_pole.norm() < 1e-5 * rep.rhs.norm());
    }
}
