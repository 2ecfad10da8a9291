//! Harmonic tight frames and their exact divisibility theory.
//!
//! `HTF(n, m, s)` keeps the first `n` rows of the `m × m` DFT matrix and
//! scales every column to squared norm `s`. Its divisors are governed by
//! integer data only: the divisors of `m` in `[n, m − n]` (the set `D`),
//! the minimal ones among them (`P`), and the sizes reachable by disjoint
//! unions of `P`-cosets (`S`).

mod sets;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{FrameError, Result};
use crate::frame::{CMatrix, FrameMatrix, IndexSet};

pub use sets::{divisor_sets, factorize, is_balancing, DivisorSets};

/// Absolute tolerance for vanishing sums of roots of unity.
pub const VANISHING_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HtfParams {
    pub n: usize,
    pub m: usize,
    pub s: f64,
}

impl HtfParams {
    pub fn new(n: usize, m: usize, s: f64) -> Result<Self> {
        let params = HtfParams { n, m, s };
        params.validate()?;
        Ok(params)
    }

    /// Unit-norm parameters (`s = 1`).
    pub fn unit(n: usize, m: usize) -> Self {
        HtfParams { n, m, s: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m < self.n {
            return Err(FrameError::invalid(format!(
                "harmonic frame needs m >= n >= 1, got n = {}, m = {}",
                self.n, self.m
            )));
        }
        if !(self.s > 0.0 && self.s.is_finite()) {
            return Err(FrameError::invalid(format!(
                "scale s must be positive, got {}",
                self.s
            )));
        }
        Ok(())
    }

    /// Frame bound `s·m/n`.
    pub fn bound(&self) -> f64 {
        self.s * self.m as f64 / self.n as f64
    }
}

/// `e^{2πi·k/m}` with the exponent reduced mod `m` first.
pub(crate) fn root_of_unity(m: usize, k: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (k % m) as f64 / m as f64)
}

/// Column `k + 1` is `√(s/n)·(1, γ^k, …, γ^{(n−1)k})` with `γ = e^{2πi/m}`.
pub fn htf(params: &HtfParams) -> Result<FrameMatrix> {
    params.validate()?;
    let HtfParams { n, m, s } = *params;
    let scale = (s / n as f64).sqrt();
    let data = CMatrix::from_fn(n, m, |j, k| root_of_unity(m, j * k) * scale);
    FrameMatrix::new(data)
}

/// `I(d, q) = {k·m/d + q : k = 0..d−1}`.
pub fn index_coset(m: usize, d: usize, q: usize) -> Result<IndexSet> {
    if d == 0 || m % d != 0 {
        return Err(FrameError::invalid(format!("{d} does not divide {m}")));
    }
    let stride = m / d;
    if q == 0 || q > stride {
        return Err(FrameError::invalid(format!(
            "coset offset {q} outside 1..={stride}"
        )));
    }
    Ok((0..d).map(|k| k * stride + q).collect())
}

/// Closed-form primality: prime iff `D` is empty (`n ≥ 2`); for `n = 1`
/// every harmonic frame with `m ≥ 2` is divisible.
pub fn htf_is_prime(n: usize, m: usize) -> bool {
    if n <= 1 {
        return m < 2;
    }
    divisor_sets(n, m).d_set.is_empty()
}

/// The `m/p` prime factors `U^{i−1}·HTF(n, p, s)`, `U = diag(γ^0, …, γ^{n−1})`.
///
/// Factor `i` holds the columns with indices `I(p, i)` in coset order.
pub fn htf_prime_factors(params: &HtfParams, p: usize) -> Result<Vec<FrameMatrix>> {
    params.validate()?;
    let HtfParams { n, m, s } = *params;
    if !divisor_sets(n, m).p_set.contains(&p) {
        return Err(FrameError::NotMinimalDivisor { n, m, p });
    }
    let base = htf(&HtfParams { n, m: p, s })?;
    (0..m / p)
        .map(|shift| {
            let data = CMatrix::from_fn(n, p, |j, t| {
                root_of_unity(m, j * shift) * base.matrix()[(j, t)]
            });
            FrameMatrix::new(data)
        })
        .collect()
}

/// An index set of the requested size whose harmonic sub-frame is tight.
///
/// The size (or its complement, when larger than `m/2`) is written as a sum
/// of `P`-elements with the fewest parts and cosets are packed greedily by
/// smallest offset. When greedy packing collides, a depth-first search over
/// offsets runs, first for that representation and then for the others.
pub fn htf_divisor_of_size(params: &HtfParams, size: usize) -> Result<IndexSet> {
    let (n, m, flip, reps) = packing_inputs(params, size)?;
    let greedy = greedy_packing(m, &reps[0]);
    let chosen = match greedy {
        Ok(chosen) => chosen,
        Err(_) => reps
            .iter()
            .find_map(|parts| search_packing(m, parts))
            .ok_or_else(|| FrameError::PackingFailed {
                n,
                m,
                size,
                detail: format!("no disjoint coset packing for any of {} representations", reps.len()),
            })?,
    };
    let set = IndexSet::new(chosen);
    Ok(if flip { set.complement(m) } else { set })
}

/// Greedy packing only; errors with the collision that stopped it.
pub fn htf_divisor_of_size_greedy(params: &HtfParams, size: usize) -> Result<IndexSet> {
    let (n, m, flip, reps) = packing_inputs(params, size)?;
    let chosen = greedy_packing(m, &reps[0]).map_err(|(q, taken, count)| {
        FrameError::PackingFailed {
            n,
            m,
            size,
            detail: format!(
                "placed {taken} of {count} disjoint cosets of size {q} (representation {:?})",
                reps[0]
            ),
        }
    })?;
    let set = IndexSet::new(chosen);
    Ok(if flip { set.complement(m) } else { set })
}

type Representation = Vec<(usize, usize)>;

fn packing_inputs(
    params: &HtfParams,
    size: usize,
) -> Result<(usize, usize, bool, Vec<Representation>)> {
    params.validate()?;
    let HtfParams { n, m, .. } = *params;
    let sets = divisor_sets(n, m);
    if !sets.s_set.contains(&size) {
        return Err(FrameError::NotAdmissibleSize { n, m, size });
    }
    let flip = 2 * size > m;
    let target = if flip { m - size } else { size };
    let reps = sets::representations(&sets.p_set, target);
    if reps.is_empty() {
        return Err(FrameError::PackingFailed {
            n,
            m,
            size,
            detail: format!("{target} is not a sum of elements of P = {:?}", sets.p_set),
        });
    }
    Ok((n, m, flip, reps))
}

fn coset_indices(m: usize, q: usize, offset: usize) -> impl Iterator<Item = usize> {
    (0..q).map(move |t| offset + t * (m / q))
}

fn greedy_packing(
    m: usize,
    parts: &[(usize, usize)],
) -> std::result::Result<Vec<usize>, (usize, usize, usize)> {
    let mut used = vec![false; m + 1];
    let mut chosen = Vec::new();
    for &(q, count) in parts {
        let mut taken = 0;
        for offset in 1..=m / q {
            if taken == count {
                break;
            }
            if coset_indices(m, q, offset).all(|i| !used[i]) {
                for i in coset_indices(m, q, offset) {
                    used[i] = true;
                    chosen.push(i);
                }
                taken += 1;
            }
        }
        if taken < count {
            return Err((q, taken, count));
        }
    }
    Ok(chosen)
}

fn search_packing(m: usize, parts: &[(usize, usize)]) -> Option<Vec<usize>> {
    let slots: Vec<usize> = parts
        .iter()
        .flat_map(|&(q, count)| std::iter::repeat_n(q, count))
        .collect();
    let mut used = vec![false; m + 1];
    let mut offsets = Vec::with_capacity(slots.len());
    if place(m, &slots, &mut used, &mut offsets) {
        Some(
            slots
                .iter()
                .zip(&offsets)
                .flat_map(|(&q, &o)| coset_indices(m, q, o))
                .collect(),
        )
    } else {
        None
    }
}

fn place(m: usize, slots: &[usize], used: &mut [bool], offsets: &mut Vec<usize>) -> bool {
    let k = offsets.len();
    if k == slots.len() {
        return true;
    }
    let q = slots[k];
    // Repeated sizes take increasing offsets.
    let start = if k > 0 && slots[k - 1] == q { offsets[k - 1] + 1 } else { 1 };
    for offset in start..=m / q {
        if coset_indices(m, q, offset).any(|i| used[i]) {
            continue;
        }
        for i in coset_indices(m, q, offset) {
            used[i] = true;
        }
        offsets.push(offset);
        if place(m, slots, used, offsets) {
            return true;
        }
        offsets.pop();
        for i in coset_indices(m, q, offset) {
            used[i] = false;
        }
    }
    false
}

/// `μ_{n,m} = (1/n)·sin(πn/m)/sin(π/m)`; zero when `m ≤ n`.
pub fn htf_coherence(n: usize, m: usize) -> f64 {
    if m <= n || n == 0 {
        return 0.0;
    }
    let (nf, mf) = (n as f64, m as f64);
    (PI * nf / mf).sin() / (PI / mf).sin() / nf
}

/// Whether `Σ_{j ∈ subset} γ^{power·(j−1)}` vanishes, `γ = e^{2πi/m}`.
pub fn vanishing_subsum_check(m: usize, subset: &IndexSet, power: usize) -> bool {
    let sum: Complex64 = subset
        .iter()
        .map(|j| root_of_unity(m, (power % m) * ((j - 1) % m)))
        .sum();
    sum.norm() <= VANISHING_TOL
}

/// The sub-frame of `HTF(n, m, ·)` on `subset` is tight iff every power
/// `1..n−1` sums to zero over it.
pub fn htf_subset_is_tight(n: usize, m: usize, subset: &IndexSet) -> bool {
    !subset.is_empty() && (1..n).all(|power| vanishing_subsum_check(m, subset, power))
}
