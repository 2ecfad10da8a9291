//! Bitmask subset enumeration with an early-exit tightness test.
//!
//! Bit `i` of a mask selects column `i` (index `i + 1`). The test computes
//! the diagonal of `Φ_J Φ_J*` first and then the off-diagonal entries one at
//! a time, rejecting as soon as the relative Frobenius residual is certain to
//! exceed the tolerance. Accepting a subset here is the same verdict
//! `check_tight` gives on the extracted sub-matrix.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::frame::FrameMatrix;

pub(crate) struct SubsetTester {
    n: usize,
    /// Column-major copy of the frame, `n` entries per column.
    entries: Vec<Complex64>,
    /// `|entry|²` in the same layout.
    moduli: Vec<f64>,
    tol: f64,
}

impl SubsetTester {
    /// Callers guarantee `n ≤ m ≤ 63`.
    pub(crate) fn new(phi: &FrameMatrix, tol: f64) -> Self {
        assert!(phi.n() <= 64 && phi.m() <= 63, "subset search limited to 63 columns");
        let entries: Vec<Complex64> = phi.matrix().iter().copied().collect();
        let moduli = entries.iter().map(|z| z.norm_sqr()).collect();
        SubsetTester {
            n: phi.n(),
            entries,
            moduli,
            tol,
        }
    }

    /// Fitted bound of the sub-frame on `mask` if it is tight with bound > tol.
    pub(crate) fn tight_bound(&self, mask: u64) -> Option<f64> {
        let n = self.n;
        let mut storage = [0.0f64; 64];
        let diag = &mut storage[..n];
        for col in bits(mask) {
            let base = col * n;
            for (d, v) in diag.iter_mut().zip(&self.moduli[base..base + n]) {
                *d += v;
            }
        }
        self.finish(mask, diag)
    }

    fn finish(&self, mask: u64, diag: &[f64]) -> Option<f64> {
        let n = self.n;
        let bound = diag.iter().sum::<f64>() / n as f64;
        if bound <= self.tol {
            return None;
        }
        // residual ≤ tol  ⇔  dev + (1 − tol²)·off ≤ tol²·Σdiag²
        let tol2 = self.tol * self.tol;
        let budget = tol2 * diag.iter().map(|d| d * d).sum::<f64>();
        let mut acc: f64 = diag.iter().map(|d| (d - bound) * (d - bound)).sum();
        if acc > budget {
            return None;
        }
        let weight = 2.0 * (1.0 - tol2);
        for r in 0..n {
            for s in (r + 1)..n {
                let mut g = Complex64::new(0.0, 0.0);
                for col in bits(mask) {
                    let base = col * n;
                    g += self.entries[base + r] * self.entries[base + s].conj();
                }
                acc += weight * g.norm_sqr();
                if acc > budget {
                    return None;
                }
            }
        }
        Some(bound)
    }
}

/// Iterator over set bit positions, ascending.
pub(crate) fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(b)
        }
    })
}

/// Next larger integer with the same popcount (Gosper's hack).
#[inline]
pub(crate) fn next_combination(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

/// All `k`-element masks over `width` bits, ascending.
pub(crate) fn combinations(width: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = 1u64 << width;
    let mut current = if k == 0 {
        None
    } else if k <= width {
        Some((1u64 << k) - 1)
    } else {
        None
    };
    let mut emitted_empty = k != 0;
    std::iter::from_fn(move || {
        if !emitted_empty {
            emitted_empty = true;
            return Some(0);
        }
        let x = current?;
        if x >= limit {
            current = None;
            return None;
        }
        current = Some(next_combination(x));
        Some(x)
    })
}

/// Smallest mask of popcount `k` over `m` bits that contains bit 0 and
/// satisfies `accept`. Work is split by highest set bit; the result equals
/// the sequential ascending scan.
pub(crate) fn first_with_bit0<F>(m: usize, k: usize, accept: F) -> Option<u64>
where
    F: Fn(u64) -> bool + Sync,
{
    if k == 0 || k > m {
        return None;
    }
    if k == 1 {
        return accept(1).then_some(1);
    }
    (k - 1..m).into_par_iter().find_map_first(|top| {
        combinations(top - 1, k - 2)
            .map(|lower| 1 | (lower << 1) | (1u64 << top))
            .find(|&mask| accept(mask))
    })
}
