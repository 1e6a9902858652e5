//! Enumeration engines behind the subset/partition sums: `(S, T)` subset
//! pairs with `|S| = |T|`, partitions of the leftover shifts into
//! admissible blocks, unrestricted set partitions, and ordered
//! tripartitions `K + L + M` of `{1..n}`.
//!
//! Every enumerator yields a deterministic order (a pure function of the
//! input labels) so that floating-point reductions downstream replay
//! bit-for-bit.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Which of the two shift families an element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Alpha,
    Beta,
}

/// One shift parameter with a stable identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shift {
    pub label: u32,
    pub value: Complex64,
    pub side: Side,
}

/// An ordered multiset of complex shifts (the sets `A, B, C, D, U`).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ShiftSet {
    items: Vec<Shift>,
}

impl ShiftSet {
    pub fn new(items: Vec<Shift>) -> Self {
        debug_assert!({
            let mut labels: Vec<u32> = items.iter().map(|s| s.label).collect();
            labels.sort_unstable();
            labels.windows(2).all(|w| w[0] != w[1])
        });
        ShiftSet { items }
    }

    /// Alpha-side set with labels `0..len`.
    pub fn alphas(values: &[Complex64]) -> Self {
        ShiftSet {
            items: values
                .iter()
                .enumerate()
                .map(|(i, &v)| Shift {
                    label: i as u32,
                    value: v,
                    side: Side::Alpha,
                })
                .collect(),
        }
    }

    /// Beta-side set with labels `0..len`.
    pub fn betas(values: &[Complex64]) -> Self {
        ShiftSet {
            items: values
                .iter()
                .enumerate()
                .map(|(i, &v)| Shift {
                    label: i as u32,
                    value: v,
                    side: Side::Beta,
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.items.iter().map(|s| s.value).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Shift> {
        self.items.iter()
    }

    pub fn get(&self, i: usize) -> &Shift {
        &self.items[i]
    }

    /// The value-negated set `S⁻ = {-s : s ∈ S}` (labels preserved).
    pub fn negated(&self) -> Self {
        ShiftSet {
            items: self
                .items
                .iter()
                .map(|s| Shift {
                    value: -s.value,
                    ..*s
                })
                .collect(),
        }
    }
}

/// A choice `S ⊂ A`, `T ⊂ B` with `|S| = |T|`, kept as index lists into
/// the parent sets together with the complements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetAssignment {
    pub s: Vec<usize>,
    pub sbar: Vec<usize>,
    pub t: Vec<usize>,
    pub tbar: Vec<usize>,
}

impl SubsetAssignment {
    pub fn s_values(&self, a: &ShiftSet) -> Vec<Complex64> {
        self.s.iter().map(|&i| a.get(i).value).collect()
    }
    pub fn t_values(&self, b: &ShiftSet) -> Vec<Complex64> {
        self.t.iter().map(|&i| b.get(i).value).collect()
    }
    pub fn sbar_values(&self, a: &ShiftSet) -> Vec<Complex64> {
        self.sbar.iter().map(|&i| a.get(i).value).collect()
    }
    pub fn tbar_values(&self, b: &ShiftSet) -> Vec<Complex64> {
        self.tbar.iter().map(|&i| b.get(i).value).collect()
    }
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn complement(n: usize, chosen: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !chosen.contains(i)).collect()
}

/// All `(S, T)` with `S ⊂ A`, `T ⊂ B`, `|S| = |T|`, ordered by size then
/// lexicographically.
pub fn enumerate_subset_pairs(a: &ShiftSet, b: &ShiftSet) -> Vec<SubsetAssignment> {
    let mut out = Vec::new();
    for k in 0..=a.len().min(b.len()) {
        for s in subsets_of_size(a.len(), k) {
            for t in subsets_of_size(b.len(), k) {
                out.push(SubsetAssignment {
                    sbar: complement(a.len(), &s),
                    tbar: complement(b.len(), &t),
                    s: s.clone(),
                    t,
                });
            }
        }
    }
    out
}

/// One element of the leftover multiset `S̄ + T̄`, carrying its own value
/// so partition blocks stay self-contained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Elem {
    pub side: Side,
    pub label: u32,
    pub value: Complex64,
}

/// One block `W_r` of a set partition.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionBlock {
    pub members: Vec<Elem>,
}

impl PartitionBlock {
    pub fn len(&self) -> usize {
        self.members.len()
    }
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
    pub fn alphas(&self) -> impl Iterator<Item = &Elem> {
        self.members.iter().filter(|e| e.side == Side::Alpha)
    }
    pub fn betas(&self) -> impl Iterator<Item = &Elem> {
        self.members.iter().filter(|e| e.side == Side::Beta)
    }
}

/// A set partition of `S̄ + T̄` into blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub blocks: Vec<PartitionBlock>,
}

/// All partitions of `S̄ + T̄` into singletons and mixed alpha–beta pairs;
/// equivalently all partial matchings between the two sides. This is the
/// restricted partition family the eigenvalue-side case table admits.
pub fn enumerate_admissible_partitions(sbar: &[Elem], tbar: &[Elem]) -> Vec<Partition> {
    debug_assert!(sbar.iter().all(|e| e.side == Side::Alpha));
    debug_assert!(tbar.iter().all(|e| e.side == Side::Beta));
    let mut out = Vec::new();
    let na = sbar.len();
    // Match the first unmatched alpha either to nothing or to one of the
    // free betas; recursion depth na.
    fn rec(
        i: usize,
        sbar: &[Elem],
        tbar: &[Elem],
        used: &mut Vec<bool>,
        pairs: &mut Vec<(usize, usize)>,
        out: &mut Vec<Partition>,
    ) {
        if i == sbar.len() {
            let mut blocks = Vec::new();
            for (ai, bi) in pairs.iter() {
                blocks.push(PartitionBlock {
                    members: vec![sbar[*ai], tbar[*bi]],
                });
            }
            let matched: Vec<usize> = pairs.iter().map(|p| p.0).collect();
            for (ai, e) in sbar.iter().enumerate() {
                if !matched.contains(&ai) {
                    blocks.push(PartitionBlock { members: vec![*e] });
                }
            }
            for (bi, e) in tbar.iter().enumerate() {
                if !used[bi] {
                    blocks.push(PartitionBlock { members: vec![*e] });
                }
            }
            out.push(Partition { blocks });
            return;
        }
        // alpha i stays a singleton
        rec(i + 1, sbar, tbar, used, pairs, out);
        // or pairs with each free beta
        for j in 0..tbar.len() {
            if !used[j] {
                used[j] = true;
                pairs.push((i, j));
                rec(i + 1, sbar, tbar, used, pairs, out);
                pairs.pop();
                used[j] = false;
            }
        }
    }
    let mut used = vec![false; tbar.len()];
    let mut pairs = Vec::new();
    rec(0, sbar, tbar, &mut used, &mut pairs, &mut out);
    let _ = na;
    out
}

/// All `Bell(|W|)` unrestricted set partitions of `W`, in the
/// restricted-growth-string order.
pub fn enumerate_set_partitions(w: &[Elem]) -> Result<Vec<Partition>> {
    if w.len() > 8 {
        return Err(Error::TooLarge("set partitions limited to |W| <= 8"));
    }
    if w.is_empty() {
        return Ok(vec![Partition { blocks: Vec::new() }]);
    }
    let mut out = Vec::new();
    // assignment[i] = block id of element i; restricted growth strings.
    fn rec(i: usize, max_id: usize, assignment: &mut Vec<usize>, w: &[Elem], out: &mut Vec<Partition>) {
        if i == w.len() {
            let nblocks = max_id + 1;
            let mut blocks = vec![Vec::new(); nblocks];
            for (e, &b) in w.iter().zip(assignment.iter()) {
                blocks[b].push(*e);
            }
            out.push(Partition {
                blocks: blocks
                    .into_iter()
                    .map(|members| PartitionBlock { members })
                    .collect(),
            });
            return;
        }
        for b in 0..=max_id + 1 {
            assignment.push(b);
            rec(i + 1, max_id.max(b), assignment, w, out);
            assignment.pop();
        }
    }
    let mut assignment = vec![0usize];
    rec(1, 0, &mut assignment, w, &mut out);
    Ok(out)
}

/// An ordered tripartition `K + L + M = {1..n}` (0-based indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tripartition {
    pub k: Vec<usize>,
    pub l: Vec<usize>,
    pub m: Vec<usize>,
}

/// All `3^n` ordered tripartitions of `{0..n-1}`, in base-3 counter order.
pub fn enumerate_tripartitions(n: usize) -> Result<Vec<Tripartition>> {
    if n > 6 {
        return Err(Error::TooLarge("tripartitions limited to n <= 6"));
    }
    let total = 3usize.pow(n as u32);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut k = Vec::new();
        let mut l = Vec::new();
        let mut m = Vec::new();
        let mut c = code;
        for i in 0..n {
            match c % 3 {
                0 => k.push(i),
                1 => l.push(i),
                _ => m.push(i),
            }
            c /= 3;
        }
        out.push(Tripartition { k, l, m });
    }
    Ok(out)
}
