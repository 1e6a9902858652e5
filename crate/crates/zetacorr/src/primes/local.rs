//! Per-prime machinery of the general arithmetic factor: the local ratio
//! `A_{p,θ}`, the theta integrals behind `c_{S,T}`, the case tables
//! `H_{p,1}` / `H_{p,2}`, and the assembled Euler product `A_ζ`.
//!
//! All theta integrals run over one period of a smooth function of
//! `e(θ)`, so equispaced trapezoid nodes converge spectrally; node counts
//! are powers of two and every integral is cross-checked against its own
//! half-resolution value.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::combinat::{enumerate_set_partitions, Elem, PartitionBlock, ShiftSet, Side};
use crate::error::{Error, Result};
use crate::numerics::cpow;

use super::{PrimeContext, PrimeTruncated};

/// Equispaced theta nodes on `[0, 1)` with a convergence tolerance for the
/// node-doubling check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaQuadrature {
    nodes: usize,
    pub tol: f64,
}

impl Default for ThetaQuadrature {
    fn default() -> Self {
        ThetaQuadrature {
            nodes: 256,
            tol: 1e-10,
        }
    }
}

impl ThetaQuadrature {
    pub fn new(nodes: usize) -> Result<Self> {
        if nodes < 32 || !nodes.is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "theta nodes must be a power of two >= 32, got {nodes}"
            )));
        }
        Ok(ThetaQuadrature {
            nodes,
            tol: 1e-10,
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn doubled(&self) -> Self {
        ThetaQuadrature {
            nodes: self.nodes * 2,
            tol: self.tol,
        }
    }

    /// `e(θ_j) = e^{2πi j/q}` for all nodes.
    fn roots(&self) -> Vec<Complex64> {
        let step = Complex64::new(0.0, TAU / self.nodes as f64).exp();
        let mut out = Vec::with_capacity(self.nodes);
        let mut cur = Complex64::new(1.0, 0.0);
        for _ in 0..self.nodes {
            out.push(cur);
            cur *= step;
        }
        out
    }
}

/// Arguments of `c_{S,T}(X)`: the subset pair plus the side-tagged shifts
/// `X ⊂ S̄ + T̄` the integrand differentiates against.
#[derive(Debug, Clone)]
pub struct LocalShiftData {
    pub s: ShiftSet,
    pub t: ShiftSet,
    pub x: Vec<Elem>,
}

fn pole_check(p: u64, shifts: &[Complex64]) -> Result<()> {
    for x in shifts {
        if ((p as f64).powf(-0.5 - x.re) - 1.0).abs() < 1e-9 {
            return Err(Error::LocalPole(p));
        }
    }
    Ok(())
}

/// `z_{p,θ}(x) = (1 - e(θ) p^{-x})^{-1}` evaluated as a function of the
/// unit-circle point `e`, with `w = p^{-x}` precomputed.
#[inline]
fn z_ptheta(e: Complex64, w: Complex64) -> Complex64 {
    1.0 / (1.0 - e * w)
}

/// The local ratio `A_{p,θ}(A, B; C, D)` at a single theta.
pub fn local_factor(
    p: u64,
    theta: f64,
    a: &ShiftSet,
    b: &ShiftSet,
    c: &ShiftSet,
    d: &ShiftSet,
) -> Result<Complex64> {
    let all: Vec<Complex64> = a
        .values()
        .into_iter()
        .chain(b.values())
        .chain(c.values())
        .chain(d.values())
        .collect();
    pole_check(p, &all)?;
    let e = Complex64::new(0.0, TAU * theta).exp();
    let em = e.conj();
    let mut num = Complex64::new(1.0, 0.0);
    for &x in &a.values() {
        num *= z_ptheta(em, cpow(p as f64, -(0.5 + x)));
    }
    for &x in &b.values() {
        num *= z_ptheta(e, cpow(p as f64, -(0.5 + x)));
    }
    let mut den = Complex64::new(1.0, 0.0);
    for &x in &c.values() {
        den *= z_ptheta(em, cpow(p as f64, -(0.5 + x)));
    }
    for &x in &d.values() {
        den *= z_ptheta(e, cpow(p as f64, -(0.5 + x)));
    }
    Ok(num / den)
}

/// Theta integrals of `A_{p,θ}(S,T) := A_{p,θ}(T⁻, S⁻; S, T)` against
/// products of `z'_{p,∓θ}/z_{p,∓θ}(1/2 + ·)` weights, one weight per
/// element of `S̄ + T̄`. Built once per `(S, T, p)`; any subset integral is
/// then a masked average over the stored node values.
pub(crate) struct SubsetIntegrals {
    /// trapezoid mean of the base integrand (all nodes)
    pub i_empty: Complex64,
    /// same from every other node — the built-in half-resolution check
    pub i_empty_coarse: Complex64,
    base: Vec<Complex64>,
    weights: Vec<Vec<Complex64>>,
}

impl SubsetIntegrals {
    pub fn new(
        p: u64,
        svals: &[Complex64],
        tvals: &[Complex64],
        elems: &[Elem],
        quad: &ThetaQuadrature,
    ) -> Result<Self> {
        let mut all: Vec<Complex64> = svals.to_vec();
        all.extend_from_slice(tvals);
        all.extend(elems.iter().map(|e| e.value));
        pole_check(p, &all)?;

        let pf = p as f64;
        let lp = pf.ln();
        let roots = quad.roots();
        let q = roots.len();

        // A_{p,θ}(S,T) = Π_{t̂} z_{p,-θ}(1/2 - t̂) Π_{ŝ} z_{p,θ}(1/2 - ŝ)
        //              / (Π_{ŝ} z_{p,-θ}(1/2 + ŝ) Π_{t̂} z_{p,θ}(1/2 + t̂))
        let ws_m: Vec<Complex64> = tvals.iter().map(|&t| cpow(pf, -(0.5 - t))).collect();
        let ws_p: Vec<Complex64> = svals.iter().map(|&s| cpow(pf, -(0.5 - s))).collect();
        let wd_m: Vec<Complex64> = svals.iter().map(|&s| cpow(pf, -(0.5 + s))).collect();
        let wd_p: Vec<Complex64> = tvals.iter().map(|&t| cpow(pf, -(0.5 + t))).collect();
        let we: Vec<(Side, Complex64)> = elems
            .iter()
            .map(|e| (e.side, cpow(pf, -(0.5 + e.value))))
            .collect();

        let mut base = Vec::with_capacity(q);
        let mut weights = vec![Vec::with_capacity(q); elems.len()];
        for &e in &roots {
            let em = e.conj();
            let mut v = Complex64::new(1.0, 0.0);
            for &w in &ws_m {
                v *= z_ptheta(em, w);
            }
            for &w in &ws_p {
                v *= z_ptheta(e, w);
            }
            for &w in &wd_m {
                v /= z_ptheta(em, w);
            }
            for &w in &wd_p {
                v /= z_ptheta(e, w);
            }
            base.push(v);
            for (slot, &(side, w)) in weights.iter_mut().zip(&we) {
                // z'_{p,ε}/z_{p,ε}(x) = -log p · εw/(1 - εw), ε = e(∓θ)
                let eps = match side {
                    Side::Alpha => em,
                    Side::Beta => e,
                };
                slot.push(-lp * eps * w / (1.0 - eps * w));
            }
        }

        let mean = |stride: usize| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut count = 0usize;
            let mut j = 0;
            while j < q {
                acc += base[j];
                count += 1;
                j += stride;
            }
            acc / count as f64
        };
        Ok(SubsetIntegrals {
            i_empty: mean(1),
            i_empty_coarse: mean(2),
            base,
            weights,
        })
    }

    /// `c_{S,T}(X)` for the element subset given by `mask` (bit `i` selects
    /// `elems[i]` from the constructor).
    pub fn c_subset(&self, mask: u32) -> Result<Complex64> {
        if self.i_empty.norm() < 1e-10 {
            return Err(Error::DenominatorNearZero(self.i_empty.norm()));
        }
        let q = self.base.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..q {
            let mut v = self.base[j];
            let mut m = mask;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                v *= self.weights[i][j];
                m &= m - 1;
            }
            acc += v;
        }
        Ok(acc / q as f64 / self.i_empty)
    }

    pub fn convergence_gap(&self) -> f64 {
        (self.i_empty - self.i_empty_coarse).norm()
    }
}

/// `c_{S,T}(X)` with an explicit node-doubling convergence check.
pub fn c_st(p: u64, data: &LocalShiftData, quad: &ThetaQuadrature) -> Result<Complex64> {
    let svals = data.s.values();
    let tvals = data.t.values();
    let mask = (1u32 << data.x.len()) - 1;
    let fine = SubsetIntegrals::new(p, &svals, &tvals, &data.x, quad)?;
    let finer = SubsetIntegrals::new(p, &svals, &tvals, &data.x, &quad.doubled())?;
    let v1 = fine.c_subset(mask)?;
    let v2 = finer.c_subset(mask)?;
    let gap = (v1 - v2).norm();
    if gap > quad.tol * v2.norm().max(1.0) {
        return Err(Error::QuadratureNotConverged(gap));
    }
    Ok(v2)
}

/// The `H_{p,1}` case table: log-derivatives of the local zeta factor.
/// Nonzero only on singletons and mixed alpha–beta pairs.
pub fn h_p1(p: u64, s: &ShiftSet, t: &ShiftSet, w: &PartitionBlock) -> Complex64 {
    let pf = p as f64;
    let lp = pf.ln();
    // z_p'/z_p(1+x) = -log p / (p^{1+x} - 1)
    let zl = |x: Complex64| -lp / (cpow(pf, x + 1.0) - 1.0);
    // (z_p'/z_p)'(1+x) = log²p · p^{1+x} / (p^{1+x} - 1)²
    let zlp = |x: Complex64| {
        let u = cpow(pf, x + 1.0);
        lp * lp * u / ((u - 1.0) * (u - 1.0))
    };
    let na = w.alphas().count();
    let nb = w.betas().count();
    match (w.len(), na, nb) {
        (1, 1, 0) => {
            let a = w.members[0].value;
            let mut acc = Complex64::new(0.0, 0.0);
            for sh in s.iter() {
                acc += zl(a - sh.value);
            }
            for th in t.iter() {
                acc -= zl(a + th.value);
            }
            acc
        }
        (1, 0, 1) => {
            let b = w.members[0].value;
            let mut acc = Complex64::new(0.0, 0.0);
            for th in t.iter() {
                acc += zl(b - th.value);
            }
            for sh in s.iter() {
                acc -= zl(b + sh.value);
            }
            acc
        }
        (2, 1, 1) => {
            let a = w.alphas().next().unwrap().value;
            let b = w.betas().next().unwrap().value;
            zlp(a + b)
        }
        _ => Complex64::new(0.0, 0.0),
    }
}

/// `H_{p,2}`: the partition-sum of `c_{S,T}` values over all set
/// partitions of `W`. Unlike `H_{p,1}` it does not vanish on larger
/// blocks.
pub fn h_p2(
    p: u64,
    s: &ShiftSet,
    t: &ShiftSet,
    w: &PartitionBlock,
    quad: &ThetaQuadrature,
) -> Result<Complex64> {
    let svals = s.values();
    let tvals = t.values();
    let ints = SubsetIntegrals::new(p, &svals, &tvals, &w.members, quad)?;
    h_p2_from_integrals(&ints, &w.members)
}

/// Shared partition-sum step, given precomputed subset integrals whose
/// element order matches `members`.
pub(crate) fn h_p2_from_integrals(ints: &SubsetIntegrals, members: &[Elem]) -> Result<Complex64> {
    let pos = |e: &Elem| -> u32 {
        members
            .iter()
            .position(|m| m.side == e.side && m.label == e.label)
            .expect("partition element missing from integral table") as u32
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for partition in enumerate_set_partitions(members)? {
        let j = partition.blocks.len();
        let sign = if (j - 1) % 2 == 0 { 1.0 } else { -1.0 };
        let mut fact = 1.0;
        for i in 1..j {
            fact *= i as f64;
        }
        let mut prod = Complex64::new(sign * fact, 0.0);
        for block in &partition.blocks {
            let mut mask = 0u32;
            for e in &block.members {
                mask |= 1 << pos(e);
            }
            prod *= ints.c_subset(mask)?;
        }
        acc += prod;
    }
    Ok(acc)
}

/// The assembled arithmetic factor
/// `A_ζ(A,B;C,D) = Π_p Z_p(A,B;C,D) ∫₀¹ A_{p,θ}(A,B;C,D) dθ`,
/// truncated over the context primes with the context tail policy.
pub fn arithmetic_factor(
    a: &ShiftSet,
    b: &ShiftSet,
    c: &ShiftSet,
    d: &ShiftSet,
    ctx: &PrimeContext,
    quad: &ThetaQuadrature,
) -> Result<PrimeTruncated> {
    for v in a
        .values()
        .iter()
        .chain(b.values().iter())
        .chain(c.values().iter())
        .chain(d.values().iter())
    {
        if v.re.abs() >= 0.25 {
            return Err(Error::StripViolation(v.re));
        }
    }
    let roots = quad.roots();
    let q = roots.len();
    // Z_p(A,B) = Π (1 - p^{-1-α-β})
    let zp = |p: u64, xs: &ShiftSet, ys: &ShiftSet| -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for x in xs.iter() {
            for y in ys.iter() {
                acc *= 1.0 - cpow(p as f64, -(1.0 + x.value + y.value));
            }
        }
        acc
    };
    let mut worst_gap = 0.0f64;
    let mut factors = Vec::with_capacity(ctx.primes().len());
    for &p in ctx.primes() {
        let mut integral = Complex64::new(0.0, 0.0);
        let mut coarse = Complex64::new(0.0, 0.0);
        for (j, &e) in roots.iter().enumerate() {
            let em = e.conj();
            let mut v = Complex64::new(1.0, 0.0);
            for &x in &a.values() {
                v *= z_ptheta(em, cpow(p as f64, -(0.5 + x)));
            }
            for &x in &b.values() {
                v *= z_ptheta(e, cpow(p as f64, -(0.5 + x)));
            }
            for &x in &c.values() {
                v /= z_ptheta(em, cpow(p as f64, -(0.5 + x)));
            }
            for &x in &d.values() {
                v /= z_ptheta(e, cpow(p as f64, -(0.5 + x)));
            }
            integral += v;
            if j % 2 == 0 {
                coarse += v;
            }
        }
        integral /= q as f64;
        coarse /= (q / 2) as f64;
        worst_gap = worst_gap.max((integral - coarse).norm());
        let zfac = zp(p, a, b) * zp(p, c, d) / (zp(p, a, d) * zp(p, b, c));
        factors.push(zfac * integral);
        pole_check(p, &a.values())?;
        pole_check(p, &b.values())?;
        pole_check(p, &c.values())?;
        pole_check(p, &d.values())?;
    }
    if worst_gap > quad.tol.max(1e-12) * 10.0 {
        return Err(Error::QuadratureNotConverged(worst_gap));
    }
    Ok(ctx.product_of_factors(&factors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::closed::a_product;
    use crate::primes::TailPolicy;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn empty() -> ShiftSet {
        ShiftSet::alphas(&[])
    }

    #[test]
    fn local_factor_trivial_cases() {
        let one = local_factor(3, 0.37, &empty(), &empty(), &empty(), &empty()).unwrap();
        assert!((one - 1.0).norm() < 1e-15);
        // C = A, D = B makes the ratio cancel exactly
        let a = ShiftSet::alphas(&[c(0.1, 0.05)]);
        let b = ShiftSet::betas(&[c(-0.03, 0.2)]);
        let v = local_factor(5, 0.81, &a, &b, &a, &b).unwrap();
        assert!((v - 1.0).norm() < 1e-15);
    }

    #[test]
    fn local_factor_scalar_value() {
        // p = 2, θ = 0, A = {0.1}: the factor is z_{2,0}(0.6) = (1 - 2^{-0.6})^{-1}.
        let a = ShiftSet::alphas(&[c(0.1, 0.0)]);
        let v = local_factor(2, 0.0, &a, &empty(), &empty(), &empty()).unwrap();
        let oracle = 1.0 / (1.0 - 2.0f64.powf(-0.6));
        assert!((v.re - oracle).abs() < 1e-14 && v.im.abs() < 1e-15);
    }

    #[test]
    fn c_st_vanishes_on_singleton_without_subsets() {
        // Fourier orthogonality: the mean of e(kθ), k >= 1, over a period is 0.
        let data = LocalShiftData {
            s: empty(),
            t: ShiftSet::betas(&[]),
            x: vec![Elem {
                side: Side::Alpha,
                label: 0,
                value: c(0.12, 0.3),
            }],
        };
        let v = c_st(7, &data, &ThetaQuadrature::default()).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn c_st_pair_closed_form_empty_subsets() {
        // With S = T = ∅: c({α,β}) = log²p / (p^{1+α+β} - 1).
        let alpha = c(0.07, 0.12);
        let beta = c(-0.02, -0.3);
        let data = LocalShiftData {
            s: empty(),
            t: ShiftSet::betas(&[]),
            x: vec![
                Elem {
                    side: Side::Alpha,
                    label: 0,
                    value: alpha,
                },
                Elem {
                    side: Side::Beta,
                    label: 0,
                    value: beta,
                },
            ],
        };
        let p = 3u64;
        let v = c_st(p, &data, &ThetaQuadrature::default()).unwrap();
        let lp = 3.0f64.ln();
        let oracle = lp * lp / (cpow(3.0, alpha + beta + 1.0) - 1.0);
        assert!((v - oracle).norm() < 1e-12 * oracle.norm());
    }

    #[test]
    fn c_st_node_doubling_is_stable() {
        let data = LocalShiftData {
            s: ShiftSet::alphas(&[c(0.05, 0.1)]),
            t: ShiftSet::betas(&[c(0.07, -0.2)]),
            x: vec![Elem {
                side: Side::Beta,
                label: 7,
                value: c(0.03, 0.15),
            }],
        };
        let q1 = ThetaQuadrature::default();
        let q2 = q1.doubled();
        let v1 = c_st(3, &data, &q1).unwrap();
        let v2 = c_st(3, &data, &q2).unwrap();
        assert!((v1 - v2).norm() < 1e-10);
    }

    #[test]
    fn c_st_series_oracle() {
        // Independent route: expand every factor as a truncated Laurent
        // series in e(θ) with coefficients p^{-k(...)} and read off the
        // constant term of the product (order ~40 in p^{-1/2}).
        use std::collections::HashMap;
        type Series = HashMap<i32, Complex64>;
        const ORDER: i32 = 40;
        let mul = |a: &Series, b: &Series| -> Series {
            let mut out = Series::new();
            for (&ka, &va) in a {
                for (&kb, &vb) in b {
                    let k = ka + kb;
                    if k.abs() <= ORDER {
                        *out.entry(k).or_insert(Complex64::new(0.0, 0.0)) += va * vb;
                    }
                }
            }
            out
        };
        // z_{p,εθ}(x) = Σ_{k≥0} e(εθ)^k p^{-kx}
        let zser = |p: f64, x: Complex64, eps: i32| -> Series {
            let mut out = Series::new();
            let mut term = Complex64::new(1.0, 0.0);
            let w = cpow(p, -x);
            for k in 0..=ORDER {
                out.insert(eps * k, term);
                term *= w;
            }
            out
        };
        let logd = |p: f64, x: Complex64, eps: i32| -> Series {
            // z'/z = -log p Σ_{k≥1} e(εθ)^k p^{-kx}
            let mut out = Series::new();
            let w = cpow(p, -x);
            let mut term = -p.ln() * w;
            for k in 1..=ORDER {
                out.insert(eps * k, term);
                term *= w;
            }
            out
        };
        let inv_zser = |p: f64, x: Complex64, eps: i32| -> Series {
            // 1/z_{p,εθ}(x) = 1 - e(εθ) p^{-x}
            let mut out = Series::new();
            out.insert(0, Complex64::new(1.0, 0.0));
            out.insert(eps, -cpow(p, -x));
            out
        };

        let p = 3.0f64;
        let s_val = c(0.05, 0.0);
        let t_val = c(0.07, 0.0);
        let x_val = c(0.03, 0.0);
        // A_{p,θ}(S,T) = z_{-θ}(1/2 - t̂) z_{θ}(1/2 - ŝ) / (z_{-θ}(1/2+ŝ) z_{θ}(1/2+t̂))
        let mut base = zser(p, c(0.5, 0.0) - t_val, -1);
        base = mul(&base, &zser(p, c(0.5, 0.0) - s_val, 1));
        base = mul(&base, &inv_zser(p, c(0.5, 0.0) + s_val, -1));
        base = mul(&base, &inv_zser(p, c(0.5, 0.0) + t_val, 1));
        // numerator weight: beta-side element uses z'_{p,θ}/z_{p,θ}(1/2 + x)
        let num = mul(&base, &logd(p, c(0.5, 0.0) + x_val, 1));
        let den0 = base.get(&0).copied().unwrap();
        let num0 = num.get(&0).copied().unwrap();
        let series_value = num0 / den0;

        let data = LocalShiftData {
            s: ShiftSet::alphas(&[s_val]),
            t: ShiftSet::betas(&[t_val]),
            x: vec![Elem {
                side: Side::Beta,
                label: 0,
                value: x_val,
            }],
        };
        let v = c_st(3, &data, &ThetaQuadrature::default()).unwrap();
        assert!(
            (v - series_value).norm() < 1e-12 * series_value.norm().max(1e-6),
            "quadrature {v} vs series {series_value}"
        );
    }

    #[test]
    fn h_p1_case_table() {
        let s = empty();
        let t = ShiftSet::betas(&[]);
        let single = PartitionBlock {
            members: vec![Elem {
                side: Side::Alpha,
                label: 0,
                value: c(0.2, 0.0),
            }],
        };
        assert_eq!(h_p1(5, &s, &t, &single).norm(), 0.0);
        // same-side pair vanishes
        let same = PartitionBlock {
            members: vec![
                Elem {
                    side: Side::Beta,
                    label: 0,
                    value: c(0.1, 0.0),
                },
                Elem {
                    side: Side::Beta,
                    label: 1,
                    value: c(0.2, 0.0),
                },
            ],
        };
        assert_eq!(h_p1(5, &s, &t, &same).norm(), 0.0);
        // mixed pair: (z_p'/z_p)'(1.1) at p = 2, cross-checked by centered
        // differences of log z_p.
        let mixed = PartitionBlock {
            members: vec![
                Elem {
                    side: Side::Alpha,
                    label: 0,
                    value: c(0.04, 0.0),
                },
                Elem {
                    side: Side::Beta,
                    label: 0,
                    value: c(0.06, 0.0),
                },
            ],
        };
        let got = h_p1(2, &s, &t, &mixed);
        let h = 1e-5;
        let logzp = |x: f64| -> f64 { -(1.0 - 2.0f64.powf(-x)).ln() };
        let fd = (logzp(1.1 + h) - 2.0 * logzp(1.1) + logzp(1.1 - h)) / (h * h);
        assert!((got.re - fd).abs() < 1e-5, "{} vs {}", got.re, fd);
        assert!(got.im.abs() < 1e-14);
    }

    #[test]
    fn h_p2_partition_identities() {
        let s = ShiftSet::alphas(&[c(0.05, 0.02)]);
        let t = ShiftSet::betas(&[c(0.07, -0.04)]);
        let e1 = Elem {
            side: Side::Alpha,
            label: 10,
            value: c(0.02, 0.1),
        };
        let e2 = Elem {
            side: Side::Beta,
            label: 11,
            value: c(0.08, -0.05),
        };
        let quad = ThetaQuadrature::default();
        // |W| = 2: H_p2 = c(W) - c({w1}) c({w2})
        let w = PartitionBlock {
            members: vec![e1, e2],
        };
        let got = h_p2(3, &s, &t, &w, &quad).unwrap();
        let svals = s.values();
        let tvals = t.values();
        let ints = SubsetIntegrals::new(3, &svals, &tvals, &w.members, &quad).unwrap();
        let expect = ints.c_subset(0b11).unwrap()
            - ints.c_subset(0b01).unwrap() * ints.c_subset(0b10).unwrap();
        assert!((got - expect).norm() < 1e-13);
    }

    #[test]
    fn h_p2_singleton_vanishes_for_empty_subsets() {
        let w = PartitionBlock {
            members: vec![Elem {
                side: Side::Beta,
                label: 0,
                value: c(0.04, 0.3),
            }],
        };
        let v = h_p2(11, &empty(), &ShiftSet::betas(&[]), &w, &ThetaQuadrature::default()).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn arithmetic_factor_trivial_and_degenerate() {
        let ctx = PrimeContext::with_policy(1009, TailPolicy::None).unwrap();
        let quad = ThetaQuadrature::default();
        let one = arithmetic_factor(&empty(), &empty(), &empty(), &empty(), &ctx, &quad)
            .unwrap()
            .raw;
        assert!((one - 1.0).norm() < 1e-14);

        // The single-pair identification: A_ζ(T⁻, S⁻; S, T) = A(a + b).
        let a_shift = c(0.06, 0.09);
        let b_shift = c(0.04, -0.13);
        let s = ShiftSet::alphas(&[a_shift]);
        let t = ShiftSet::betas(&[b_shift]);
        let got = arithmetic_factor(&t.negated(), &s.negated(), &s, &t, &ctx, &quad)
            .unwrap()
            .raw;
        let want = a_product(a_shift + b_shift, &ctx).raw;
        assert!(
            (got - want).norm() < 1e-9 * want.norm(),
            "A_ζ {got} vs A {want}"
        );
    }

    #[test]
    fn arithmetic_factor_relabeling_invariance() {
        let ctx = PrimeContext::with_policy(101, TailPolicy::None).unwrap();
        let quad = ThetaQuadrature::default();
        let a1 = [c(0.05, 0.1), c(-0.03, 0.07)];
        let a2 = [a1[1], a1[0]];
        let b = ShiftSet::betas(&[c(0.02, -0.08)]);
        let v1 = arithmetic_factor(&ShiftSet::alphas(&a1), &b, &empty(), &empty(), &ctx, &quad)
            .unwrap()
            .raw;
        let v2 = arithmetic_factor(&ShiftSet::alphas(&a2), &b, &empty(), &empty(), &ctx, &quad)
            .unwrap()
            .raw;
        assert!((v1 - v2).norm() < 1e-13 * v1.norm());
    }
}
