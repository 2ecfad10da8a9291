//! Family-agnostic divisibility: exhaustive divisor search, complement
//! certificates and prime factorizations of arbitrary tight frames.
//!
//! A divisor of a tight frame is a subset of its vectors that is itself a
//! tight frame while the remaining vectors still form a tight frame with a
//! positive bound. Searches only visit subsets containing index 1: a subset
//! is a divisor exactly when its complement is.

mod search;

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{FrameError, Result};
use crate::frame::{check_tight, ensure_tight, FrameMatrix, IndexSet, TightnessReport};
use search::{combinations, first_with_bit0, SubsetTester};

/// Default largest `m` searched without an explicit override.
pub const DEFAULT_SEARCH_CAP: usize = 26;

/// Masks are 64-bit; no search goes beyond this many columns.
pub const MAX_SEARCH_COLUMNS: usize = 63;

/// Knobs shared by every exhaustive search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    pub tol: f64,
    pub cap: usize,
    /// Lift `cap` (still bounded by [`MAX_SEARCH_COLUMNS`]).
    pub allow_large: bool,
    /// Report `m < 2n` frames as prime without searching.
    pub use_shortcut: bool,
}

impl SearchOptions {
    pub fn new(tol: f64) -> Self {
        SearchOptions {
            tol,
            cap: DEFAULT_SEARCH_CAP,
            allow_large: false,
            use_shortcut: true,
        }
    }

    pub fn allow_large(mut self) -> Self {
        self.allow_large = true;
        self
    }

    pub fn without_shortcut(mut self) -> Self {
        self.use_shortcut = false;
        self
    }

    /// Errors when `m` exceeds the active cap.
    pub fn check_size(&self, m: usize) -> Result<()> {
        let cap = if self.allow_large {
            MAX_SEARCH_COLUMNS
        } else {
            self.cap.min(MAX_SEARCH_COLUMNS)
        };
        if m > cap {
            return Err(FrameError::SearchCapExceeded { m, cap });
        }
        Ok(())
    }
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions::new(crate::frame::DEFAULT_TOL)
    }
}

/// A subset witnessing divisibility, with both sub-frame bounds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivisorCertificate {
    #[serde(rename = "subset")]
    pub subset_j: IndexSet,
    #[serde(rename = "size")]
    pub size_p: usize,
    #[serde(rename = "bound")]
    pub bound_a1: f64,
    pub complement_bound: f64,
}

/// Disjoint prime tight sub-frames covering every column once.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeFactorization {
    pub factors: Vec<IndexSet>,
    pub bounds: Vec<f64>,
}

impl PrimeFactorization {
    /// Sorted factor sizes.
    pub fn size_multiset(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.factors.iter().map(IndexSet::len).collect();
        sizes.sort_unstable();
        sizes
    }
}

fn prepare(phi: &FrameMatrix, opts: &SearchOptions) -> Result<TightnessReport> {
    opts.check_size(phi.m())?;
    let report = ensure_tight(phi, opts.tol)?;
    Ok(report)
}

/// First divisor in (size ascending, bitmask ascending) order; see
/// [`find_divisor_with`].
pub fn find_divisor(
    phi: &FrameMatrix,
    size_filter: Option<usize>,
    tol: f64,
) -> Result<Option<DivisorCertificate>> {
    find_divisor_with(phi, size_filter, &SearchOptions::new(tol))
}

/// Searches subsets containing index 1 with sizes in `[n, m − n]`.
///
/// With `size_filter = Some(p)` only sizes `p` and `m − p` are visited and
/// the certificate returned always has size `p` (the complement of the hit
/// when the hit has size `m − p`).
pub fn find_divisor_with(
    phi: &FrameMatrix,
    size_filter: Option<usize>,
    opts: &SearchOptions,
) -> Result<Option<DivisorCertificate>> {
    let report = prepare(phi, opts)?;
    let (n, m) = (phi.n(), phi.m());
    let sizes: Vec<usize> = match size_filter {
        Some(p) => {
            if p < n || p + n > m {
                return Err(FrameError::invalid(format!(
                    "divisor size {p} outside [{n}, {}]",
                    m.saturating_sub(n)
                )));
            }
            let mut v = vec![p, m - p];
            v.sort_unstable();
            v.dedup();
            v
        }
        None if m >= 2 * n => (n..=m - n).collect(),
        None => Vec::new(),
    };
    let tester = SubsetTester::new(phi, opts.tol);
    let total = report.bound_a;
    let is_divisor = |mask: u64| {
        tester
            .tight_bound(mask)
            .is_some_and(|b| total - b > opts.tol)
    };
    for size in sizes {
        if let Some(mask) = first_with_bit0(m, size, is_divisor) {
            let bound = tester.tight_bound(mask).expect("accepted mask is tight");
            let mut cert = DivisorCertificate {
                subset_j: IndexSet::from_mask(mask),
                size_p: size,
                bound_a1: bound,
                complement_bound: total - bound,
            };
            if let Some(p) = size_filter {
                if size != p {
                    cert = DivisorCertificate {
                        subset_j: cert.subset_j.complement(m),
                        size_p: p,
                        bound_a1: cert.complement_bound,
                        complement_bound: cert.bound_a1,
                    };
                }
            }
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

pub fn is_prime_bruteforce(phi: &FrameMatrix, tol: f64) -> Result<bool> {
    is_prime_bruteforce_with(phi, &SearchOptions::new(tol))
}

pub fn is_prime_bruteforce_with(phi: &FrameMatrix, opts: &SearchOptions) -> Result<bool> {
    if opts.use_shortcut && phi.m() < 2 * phi.n() {
        ensure_tight(phi, opts.tol)?;
        return Ok(true);
    }
    Ok(find_divisor_with(phi, None, opts)?.is_none())
}

/// Certificate for `{1..m} \ subset`, after re-verifying both halves.
pub fn complement_certificate(
    phi: &FrameMatrix,
    subset_j: &IndexSet,
    tol: f64,
) -> Result<DivisorCertificate> {
    let whole = ensure_tight(phi, tol)?;
    let m = phi.m();
    subset_j.check_range(m)?;
    let complement = subset_j.complement(m);
    if subset_j.is_empty() || complement.is_empty() {
        return Err(FrameError::NotADivisor(
            "subset must be proper and non-empty".into(),
        ));
    }
    let part = check_tight(&phi.sub_frame(subset_j)?, tol);
    if !part.is_tight {
        return Err(FrameError::NotADivisor(format!(
            "sub-frame is not tight (residual {:.3e})",
            part.residual
        )));
    }
    if !(part.bound_a > tol && part.bound_a < whole.bound_a - tol) {
        return Err(FrameError::NotADivisor(format!(
            "sub-frame bound {} not inside ({tol}, {})",
            part.bound_a,
            whole.bound_a - tol
        )));
    }
    let rest = check_tight(&phi.sub_frame(&complement)?, tol);
    if !rest.is_tight {
        return Err(FrameError::NotADivisor(format!(
            "complement is not tight (residual {:.3e})",
            rest.residual
        )));
    }
    Ok(DivisorCertificate {
        size_p: complement.len(),
        subset_j: complement,
        bound_a1: whole.bound_a - part.bound_a,
        complement_bound: part.bound_a,
    })
}

/// Greedy factorization into prime tight frames.
pub fn prime_factorization(phi: &FrameMatrix, tol: f64) -> Result<PrimeFactorization> {
    prime_factorization_with(phi, &SearchOptions::new(tol))
}

/// Splits off the first divisor found and recurses on both halves. Zero
/// columns are held back and appended to the last factor.
pub fn prime_factorization_with(
    phi: &FrameMatrix,
    opts: &SearchOptions,
) -> Result<PrimeFactorization> {
    let report = prepare(phi, opts)?;
    let (zeros, support) = split_zero_columns(phi, report.bound_a, opts.tol);
    let mut factors = Vec::new();
    factor_recursive(phi, support, opts, &mut factors)?;
    factors.sort();
    if let Some(last) = factors.last_mut() {
        *last = last.union(&zeros);
    }
    let bounds = factors
        .iter()
        .map(|f| Ok(check_tight(&phi.sub_frame(f)?, opts.tol).bound_a))
        .collect::<Result<Vec<f64>>>()?;
    Ok(PrimeFactorization { factors, bounds })
}

fn split_zero_columns(phi: &FrameMatrix, bound: f64, tol: f64) -> (IndexSet, IndexSet) {
    let norms = phi.column_norms();
    let (zeros, support): (Vec<usize>, Vec<usize>) =
        (1..=phi.m()).partition(|&k| norms[k - 1] * norms[k - 1] <= tol * bound);
    (IndexSet::new(zeros), IndexSet::new(support))
}

fn factor_recursive(
    phi: &FrameMatrix,
    indices: IndexSet,
    opts: &SearchOptions,
    out: &mut Vec<IndexSet>,
) -> Result<()> {
    let sub = phi.sub_frame(&indices)?;
    match find_divisor_with(&sub, None, opts)? {
        None => out.push(indices),
        Some(cert) => {
            let local = indices.as_slice();
            let part: IndexSet = cert.subset_j.iter().map(|i| local[i - 1]).collect();
            let rest: IndexSet = indices.iter().filter(|i| !part.contains(*i)).collect();
            factor_recursive(phi, part, opts, out)?;
            factor_recursive(phi, rest, opts, out)?;
        }
    }
    Ok(())
}

/// Every multiset of prime-factor sizes over all prime factorizations.
///
/// Zero columns are ignored. Exponential in `m`; intended for small frames.
pub fn minimal_factor_size_multisets(
    phi: &FrameMatrix,
    opts: &SearchOptions,
) -> Result<Vec<Vec<usize>>> {
    let report = prepare(phi, opts)?;
    let (_, support) = split_zero_columns(phi, report.bound_a, opts.tol);
    let mut enumerator = FactorEnumerator {
        tester: SubsetTester::new(phi, opts.tol),
        n: phi.n(),
        tol: opts.tol,
        prime_memo: HashMap::new(),
        multiset_memo: HashMap::new(),
    };
    let all = enumerator.multisets(support.to_mask());
    Ok(all.into_iter().collect())
}

struct FactorEnumerator {
    tester: SubsetTester,
    n: usize,
    tol: f64,
    prime_memo: HashMap<u64, bool>,
    multiset_memo: HashMap<u64, BTreeSet<Vec<usize>>>,
}

impl FactorEnumerator {
    /// Divisors of the sub-frame on `mask` that contain its lowest column.
    fn divisors(&self, mask: u64) -> Vec<u64> {
        let size = mask.count_ones() as usize;
        if size < 2 * self.n {
            return Vec::new();
        }
        let Some(total) = self.tester.tight_bound(mask) else {
            return Vec::new();
        };
        let lowest = mask & mask.wrapping_neg();
        let rest = mask ^ lowest;
        let mut out = Vec::new();
        // Walk every submask of `rest`.
        let mut sub = rest;
        loop {
            let candidate = sub | lowest;
            let k = candidate.count_ones() as usize;
            if k >= self.n && k + self.n <= size {
                if let Some(b) = self.tester.tight_bound(candidate) {
                    if total - b > self.tol {
                        out.push(candidate);
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        out
    }

    fn is_prime(&mut self, mask: u64) -> bool {
        if let Some(&v) = self.prime_memo.get(&mask) {
            return v;
        }
        let v = self.divisors(mask).is_empty();
        self.prime_memo.insert(mask, v);
        v
    }

    fn multisets(&mut self, mask: u64) -> BTreeSet<Vec<usize>> {
        if let Some(v) = self.multiset_memo.get(&mask) {
            return v.clone();
        }
        let mut result = BTreeSet::new();
        if self.is_prime(mask) {
            result.insert(vec![mask.count_ones() as usize]);
        } else {
            for part in self.divisors(mask) {
                if !self.is_prime(part) {
                    continue;
                }
                let head = part.count_ones() as usize;
                for tail in self.multisets(mask ^ part) {
                    let mut sizes = tail.clone();
                    sizes.push(head);
                    sizes.sort_unstable();
                    result.insert(sizes);
                }
            }
        }
        self.multiset_memo.insert(mask, result.clone());
        result
    }
}

/// True iff some `p`-subset fails to be tight.
pub fn robustness_counterexample_check(phi: &FrameMatrix, p: usize, tol: f64) -> Result<bool> {
    let opts = SearchOptions::new(tol);
    prepare(phi, &opts)?;
    let (n, m) = (phi.n(), phi.m());
    if n < 2 {
        return Err(FrameError::invalid("robustness check needs n >= 2"));
    }
    if p < n || p + n > m {
        return Err(FrameError::invalid(format!(
            "p = {p} outside [{n}, {}]",
            m.saturating_sub(n)
        )));
    }
    let tester = SubsetTester::new(phi, tol);
    Ok(combinations(m, p).any(|mask| tester.tight_bound(mask).is_none()))
}

/// Every `size`-subset whose sub-frame is tight, ascending by bitmask.
pub fn tight_subsets_of_size(phi: &FrameMatrix, size: usize, tol: f64) -> Result<Vec<IndexSet>> {
    SearchOptions::new(tol).check_size(phi.m())?;
    let tester = SubsetTester::new(phi, tol);
    Ok(combinations(phi.m(), size)
        .filter(|&mask| tester.tight_bound(mask).is_some())
        .map(IndexSet::from_mask)
        .collect())
}
