//! Analysis and synthesis with divisible harmonic frames, one small DFT per
//! prime factor.
//!
//! The columns of `HTF(n, m, 1)` on the coset `I(p, q)` are
//! `U^{q−1}·HTF(n, p, 1)` with `U = diag(γ_m^j)`. Analysis therefore twists
//! the signal by `(U*)^{q−1}` and applies the size-`p` kernel adjoint once
//! per coset; synthesis runs the same steps backwards.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{FrameError, Result};
use crate::frame::{CMatrix, IndexSet};
use crate::harmonic::{divisor_sets, factorize, htf, index_coset, root_of_unity, HtfParams};

/// Cosets are evaluated in parallel once `m` reaches this size.
const PARALLEL_MIN_M: usize = 4096;

/// Largest prime factor of `p` for which the kernel runs through an FFT.
const FFT_MAX_PRIME_FACTOR: usize = 7;

#[derive(Clone)]
pub enum Kernel {
    /// Dense `n × p` product with the kernel adjoint.
    Direct,
    /// Zero-padded size-`p` transforms.
    Fft {
        forward: Arc<dyn Fft<f64>>,
        inverse: Arc<dyn Fft<f64>>,
    },
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kernel::Direct => f.write_str("Direct"),
            Kernel::Fft { forward, .. } => write!(f, "Fft(len = {})", forward.len()),
        }
    }
}

/// Precomputed data for one `(n, m, p)`; immutable and reusable.
#[derive(Clone, Debug)]
pub struct HtfTransformPlan {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub coset_count: usize,
    /// `γ_m^j`, `j = 0..n−1`.
    pub diag_u: Vec<Complex64>,
    /// `HTF(n, p, 1)`.
    pub kernel: CMatrix,
    pub coset_maps: Vec<IndexSet>,
    pub strategy: Kernel,
    /// `twist[q][j] = γ_m^{j·q}` for `q = 0..coset_count−1`.
    twist: Vec<Vec<Complex64>>,
    scale: f64,
}

impl HtfTransformPlan {
    pub fn uses_fft(&self) -> bool {
        matches!(self.strategy, Kernel::Fft { .. })
    }
}

/// Builds a plan; the kernel runs through an FFT when `p` has only small
/// prime factors.
pub fn plan(n: usize, m: usize, p: usize) -> Result<HtfTransformPlan> {
    let small = factorize(p)
        .iter()
        .all(|&(q, _)| q <= FFT_MAX_PRIME_FACTOR);
    plan_with(n, m, p, small)
}

/// Builds a plan with an explicit kernel strategy.
pub fn plan_with(n: usize, m: usize, p: usize, use_fft: bool) -> Result<HtfTransformPlan> {
    HtfParams::new(n, m, 1.0)?;
    if !divisor_sets(n, m).p_set.contains(&p) {
        return Err(FrameError::NotMinimalDivisor { n, m, p });
    }
    let coset_count = m / p;
    let diag_u: Vec<Complex64> = (0..n).map(|j| root_of_unity(m, j)).collect();
    let kernel = htf(&HtfParams::unit(n, p))?.into_matrix();
    let coset_maps = (1..=coset_count)
        .map(|q| index_coset(m, p, q))
        .collect::<Result<Vec<_>>>()?;
    let twist = (0..coset_count)
        .map(|q| (0..n).map(|j| root_of_unity(m, j * q)).collect())
        .collect();
    let strategy = if use_fft {
        let mut planner = FftPlanner::new();
        Kernel::Fft {
            forward: planner.plan_fft_forward(p),
            inverse: planner.plan_fft_inverse(p),
        }
    } else {
        Kernel::Direct
    };
    Ok(HtfTransformPlan {
        n,
        m,
        p,
        coset_count,
        diag_u,
        kernel,
        coset_maps,
        strategy,
        twist,
        scale: 1.0 / (n as f64).sqrt(),
    })
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(FrameError::DimensionMismatch {
            expected: format!("vector of length {expected}"),
            got: format!("length {got}"),
        });
    }
    Ok(())
}

/// The `p` coefficients of coset `q` (0-based).
fn analyze_coset(plan: &HtfTransformPlan, x: &[Complex64], q: usize) -> Vec<Complex64> {
    let twist = &plan.twist[q];
    match &plan.strategy {
        Kernel::Fft { forward, .. } => {
            let mut buf = vec![Complex64::new(0.0, 0.0); plan.p];
            for ((b, xj), w) in buf.iter_mut().zip(x).zip(twist) {
                *b = xj * w.conj();
            }
            forward.process(&mut buf);
            buf.iter_mut().for_each(|c| *c *= plan.scale);
            buf
        }
        Kernel::Direct => {
            let y: Vec<Complex64> = x.iter().zip(twist).map(|(xj, w)| xj * w.conj()).collect();
            (0..plan.p)
                .map(|t| {
                    y.iter()
                        .enumerate()
                        .map(|(j, yj)| yj * plan.kernel[(j, t)].conj())
                        .sum()
                })
                .collect()
        }
    }
}

/// `Σ_t c_t·U^q φ_t` over the kernel columns of coset `q` (0-based).
fn synthesize_coset(plan: &HtfTransformPlan, c: &[Complex64], q: usize) -> Vec<Complex64> {
    let stride = plan.coset_count;
    let coeffs = (0..plan.p).map(|t| c[t * stride + q]);
    let twist = &plan.twist[q];
    match &plan.strategy {
        Kernel::Fft { inverse, .. } => {
            let mut buf: Vec<Complex64> = coeffs.collect();
            inverse.process(&mut buf);
            buf.truncate(plan.n);
            buf.iter_mut()
                .zip(twist)
                .for_each(|(b, w)| *b *= w * plan.scale);
            buf
        }
        Kernel::Direct => {
            let coeffs: Vec<Complex64> = coeffs.collect();
            (0..plan.n)
                .map(|j| {
                    let s: Complex64 = coeffs
                        .iter()
                        .enumerate()
                        .map(|(t, ct)| ct * plan.kernel[(j, t)])
                        .sum();
                    s * twist[j]
                })
                .collect()
        }
    }
}

fn per_coset<F>(plan: &HtfTransformPlan, parallel: bool, f: F) -> Vec<Vec<Complex64>>
where
    F: Fn(usize) -> Vec<Complex64> + Sync + Send,
{
    if parallel {
        (0..plan.coset_count).into_par_iter().map(f).collect()
    } else {
        (0..plan.coset_count).map(f).collect()
    }
}

/// `c_i = ⟨x, φ_i⟩` for the columns of `HTF(n, m, 1)`.
pub fn analyze_fast(plan: &HtfTransformPlan, x: &[Complex64]) -> Result<Vec<Complex64>> {
    analyze_fast_with(plan, x, plan.m >= PARALLEL_MIN_M)
}

/// [`analyze_fast`] with explicit control over the per-coset fan-out.
pub fn analyze_fast_with(
    plan: &HtfTransformPlan,
    x: &[Complex64],
    parallel: bool,
) -> Result<Vec<Complex64>> {
    check_len(plan.n, x.len())?;
    let blocks = per_coset(plan, parallel, |q| analyze_coset(plan, x, q));
    let mut out = vec![Complex64::new(0.0, 0.0); plan.m];
    for (q, block) in blocks.iter().enumerate() {
        for (t, v) in block.iter().enumerate() {
            out[t * plan.coset_count + q] = *v;
        }
    }
    Ok(out)
}

/// `(1/A)·Σ c_i φ_i` with `A = m/n`.
pub fn synthesize_fast(plan: &HtfTransformPlan, c: &[Complex64]) -> Result<Vec<Complex64>> {
    synthesize_fast_with(plan, c, plan.m >= PARALLEL_MIN_M)
}

/// [`synthesize_fast`] with explicit control over the per-coset fan-out.
/// Coset contributions are summed in coset order either way.
pub fn synthesize_fast_with(
    plan: &HtfTransformPlan,
    c: &[Complex64],
    parallel: bool,
) -> Result<Vec<Complex64>> {
    check_len(plan.m, c.len())?;
    let blocks = per_coset(plan, parallel, |q| synthesize_coset(plan, c, q));
    let mut x = vec![Complex64::new(0.0, 0.0); plan.n];
    for block in &blocks {
        for (xj, v) in x.iter_mut().zip(block) {
            *xj += v;
        }
    }
    let inv_a = plan.n as f64 / plan.m as f64;
    x.iter_mut().for_each(|v| *v *= inv_a);
    Ok(x)
}

/// Reference analysis: size-`m` FFT of the zero-padded signal.
pub fn analyze_naive(n: usize, m: usize, x: &[Complex64]) -> Result<Vec<Complex64>> {
    HtfParams::new(n, m, 1.0)?;
    check_len(n, x.len())?;
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    buf[..n].copy_from_slice(x);
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    buf.iter_mut().for_each(|c| *c *= scale);
    Ok(buf)
}

/// Analysis by explicit inner products with the columns of `HTF(n, m, 1)`.
pub fn analyze_direct(n: usize, m: usize, x: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(n, x.len())?;
    let phi = htf(&HtfParams::new(n, m, 1.0)?)?;
    Ok((0..m)
        .map(|k| crate::frame::inner(x, &phi.column(k)))
        .collect())
}

/// Seeded complex Gaussian test signal.
pub fn random_signal(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchmarkReport {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub trials: usize,
    pub fast_median_ns: u64,
    pub naive_median_ns: u64,
    /// `m·log₂ p`.
    pub fast_ops_estimate: f64,
    /// `m·log₂ m`.
    pub naive_ops_estimate: f64,
    pub kernel: String,
}

fn median(mut v: Vec<u64>) -> u64 {
    v.sort_unstable();
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2
    }
}

/// Wall-clock medians of fast vs naive analysis after one warm-up call.
/// Plan construction is excluded from the fast timings.
pub fn benchmark(n: usize, m: usize, p: usize, trials: usize, seed: u64) -> Result<BenchmarkReport> {
    if trials == 0 {
        return Err(FrameError::invalid("trials must be at least 1"));
    }
    let plan = plan(n, m, p)?;
    let mut naive_planner = FftPlanner::new();
    let naive_fft = naive_planner.plan_fft_forward(m);
    let naive = |x: &[Complex64]| {
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        buf[..n].copy_from_slice(x);
        naive_fft.process(&mut buf);
        buf
    };
    let x = random_signal(n, seed);
    std::hint::black_box(analyze_fast(&plan, &x)?);
    std::hint::black_box(naive(&x));
    let mut fast_ns = Vec::with_capacity(trials);
    let mut naive_ns = Vec::with_capacity(trials);
    for _ in 0..trials {
        let t = Instant::now();
        std::hint::black_box(analyze_fast(&plan, std::hint::black_box(&x))?);
        fast_ns.push((t.elapsed().as_nanos() as u64).max(1));
        let t = Instant::now();
        std::hint::black_box(naive(std::hint::black_box(&x)));
        naive_ns.push((t.elapsed().as_nanos() as u64).max(1));
    }
    Ok(BenchmarkReport {
        n,
        m,
        p,
        trials,
        fast_median_ns: median(fast_ns),
        naive_median_ns: median(naive_ns),
        fast_ops_estimate: m as f64 * (p as f64).log2(),
        naive_ops_estimate: m as f64 * (m as f64).log2(),
        kernel: format!("{:?}", plan.strategy),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn plan_two_by_four() {
        let pl = plan(2, 4, 2).unwrap();
        assert_eq!(pl.coset_count, 2);
        assert_eq!(pl.coset_maps[0].as_slice(), &[1, 3]);
        assert_eq!(pl.coset_maps[1].as_slice(), &[2, 4]);
        assert!((pl.diag_u[1] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn plan_rejects_p_outside_p_set() {
        assert!(plan(2, 10, 5).is_ok());
        assert!(matches!(plan(2, 10, 3), Err(FrameError::NotMinimalDivisor { .. })));
    }

    #[test]
    fn e1_gives_constant_coefficients() {
        let pl = plan(2, 4, 2).unwrap();
        let x = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let c = analyze_fast(&pl, &x).unwrap();
        for v in c {
            assert!((v - Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn both_strategies_match_naive_and_direct() {
        for &(n, m, p) in &[(2, 4, 2), (2, 10, 5), (3, 24, 4), (4, 24, 4), (3, 21, 7), (2, 22, 11)] {
            for use_fft in [false, true] {
                let pl = plan_with(n, m, p, use_fft).unwrap();
                for seed in 0..5 {
                    let x = random_signal(n, seed);
                    let fast = analyze_fast(&pl, &x).unwrap();
                    let naive = analyze_naive(n, m, &x).unwrap();
                    let direct = analyze_direct(n, m, &x).unwrap();
                    assert!(max_diff(&fast, &naive) < 1e-12);
                    assert!(max_diff(&naive, &direct) < 1e-12);
                    let back = synthesize_fast(&pl, &fast).unwrap();
                    assert!(max_diff(&back, &x) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn parallel_is_bitwise_sequential() {
        let pl = plan(3, 24, 4).unwrap();
        let x = random_signal(3, 9);
        let a = analyze_fast_with(&pl, &x, true).unwrap();
        assert_eq!(a, analyze_fast_with(&pl, &x, false).unwrap());
        assert_eq!(
            synthesize_fast_with(&pl, &a, true).unwrap(),
            synthesize_fast_with(&pl, &a, false).unwrap()
        );
    }

    #[test]
    fn dimension_mismatch() {
        let pl = plan(2, 4, 2).unwrap();
        assert!(analyze_fast(&pl, &[Complex64::new(0.0, 0.0); 3]).is_err());
        assert!(synthesize_fast(&pl, &[Complex64::new(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn benchmark_needs_trials() {
        assert!(benchmark(2, 8, 2, 0, 1).is_err());
        let r = benchmark(2, 2048, 2, 3, 1).unwrap();
        assert!(r.fast_median_ns > 0 && r.naive_median_ns > 0);
    }
}
