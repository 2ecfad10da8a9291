//! Spectral tetris frames.
//!
//! Row `j` of `STF(n, m)` carries `m_j` copies of `e_j` followed, when the
//! remainder `r_j` is non-zero, by a 2×2 block `[[a, a], [b, −b]]` on rows
//! `j, j + 1` with `a = √(r_j/2)`, `b = √(1 − r_j/2)`. Remainders are kept as
//! integer numerators `ρ_j = n·r_j`, so the schedule is exact.

use num_complex::Complex64;
use serde::Serialize;

use crate::divisibility::{is_prime_bruteforce, DEFAULT_SEARCH_CAP};
use crate::error::{FrameError, Result};
use crate::frame::{CMatrix, FrameMatrix, IndexSet, DEFAULT_TOL};

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact row schedule of a spectral tetris frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TetrisSchedule {
    #[serde(skip)]
    pub n: usize,
    #[serde(skip)]
    pub m: usize,
    /// `m/n` in lowest terms.
    pub lambda: (usize, usize),
    /// `{t·n/gcd(n, m) : t = 0..gcd(n, m)}`.
    #[serde(rename = "K")]
    pub k_set: Vec<usize>,
    pub m_seq: Vec<usize>,
    /// `ρ_j` with `r_j = ρ_j / n`.
    #[serde(rename = "r_seq_numerators")]
    pub r_seq: Vec<usize>,
}

impl TetrisSchedule {
    /// Number of 2×2 blocks.
    pub fn block_count(&self) -> usize {
        self.r_seq.iter().filter(|&&r| r != 0).count()
    }

    /// 1-based column indices of the `e_j` columns of row `j` (1-based).
    pub fn one_columns(&self, row: usize) -> Vec<usize> {
        let mut start = 0;
        for j in 0..row - 1 {
            start += self.m_seq[j] + if self.r_seq[j] != 0 { 2 } else { 0 };
        }
        (start + 1..=start + self.m_seq[row - 1]).collect()
    }
}

/// Runs the recurrence; `Err` when some row would need a negative count.
fn schedule_unchecked(n: usize, m: usize) -> Result<TetrisSchedule> {
    if n == 0 || m == 0 {
        return Err(FrameError::invalid("spectral tetris needs n, m >= 1"));
    }
    let (n_i, m_i) = (n as i64, m as i64);
    let mut m_seq = Vec::with_capacity(n);
    let mut r_seq = Vec::with_capacity(n);
    let mut prev = 0i64;
    for j in 1..=n {
        let rem = if prev == 0 { m_i } else { m_i - 2 * n_i + prev };
        if rem < 0 {
            return Err(FrameError::InfeasibleTetris {
                n,
                m,
                detail: format!("row {j} would need {rem}/{n} weight from 1-columns"),
            });
        }
        m_seq.push((rem / n_i) as usize);
        prev = rem % n_i;
        r_seq.push(prev as usize);
    }
    debug_assert_eq!(prev, 0);
    let g = gcd(n, m);
    Ok(TetrisSchedule {
        n,
        m,
        lambda: (m / g, n / g),
        k_set: (0..=g).map(|t| t * n / g).collect(),
        m_seq,
        r_seq,
    })
}

/// Schedule for `m ≥ 2n`.
pub fn stf_schedule(n: usize, m: usize) -> Result<TetrisSchedule> {
    if n == 0 || m < 2 * n {
        return Err(FrameError::invalid(format!(
            "spectral tetris needs m >= 2n, got n = {n}, m = {m}"
        )));
    }
    schedule_unchecked(n, m)
}

fn assemble(s: &TetrisSchedule) -> Result<FrameMatrix> {
    let n = s.n;
    let mut data = CMatrix::zeros(n, s.m);
    let mut col = 0;
    for j in 0..n {
        for _ in 0..s.m_seq[j] {
            data[(j, col)] = Complex64::new(1.0, 0.0);
            col += 1;
        }
        let rho = s.r_seq[j];
        if rho != 0 {
            let half = rho as f64 / (2 * n) as f64;
            let (a, b) = (half.sqrt(), (1.0 - half).sqrt());
            data[(j, col)] = Complex64::new(a, 0.0);
            data[(j + 1, col)] = Complex64::new(b, 0.0);
            data[(j, col + 1)] = Complex64::new(a, 0.0);
            data[(j + 1, col + 1)] = Complex64::new(-b, 0.0);
            col += 2;
        }
    }
    debug_assert_eq!(col, s.m);
    FrameMatrix::new(data)
}

/// `STF(n, m)` for `m ≥ 2n`: unit-norm columns, bound `m/n`.
pub fn stf(n: usize, m: usize) -> Result<FrameMatrix> {
    assemble(&stf_schedule(n, m)?)
}

/// `j·m − n·⌊(j−1)m/n⌋ ≥ 3n` for all `1 < j < n/gcd(n, m)`.
pub fn stf_is_divisible(n: usize, m: usize) -> bool {
    let period = n / gcd(n, m);
    (2..period).all(|j| j * m - n * ((j - 1) * m / n) >= 3 * n)
}

/// Result of splitting a spectral tetris frame into a prime core and bases.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TetrisFactorization {
    #[serde(skip)]
    pub prime_core: FrameMatrix,
    pub basis_copies: usize,
    pub core_indices: IndexSet,
    pub basis_indices: Vec<IndexSet>,
}

/// `STF(n, m) = core ∪ L copies of the standard basis`, core prime.
///
/// Copy `l` takes the `l`-th lowest 1-column of every row. The core is
/// checked prime by brute force when small enough, otherwise by the closed
/// form applied to its own schedule.
pub fn stf_factorize(n: usize, m: usize) -> Result<TetrisFactorization> {
    let schedule = stf_schedule(n, m)?;
    let phi = assemble(&schedule)?;
    let mut copies = *schedule.m_seq.iter().min().expect("n >= 1");
    if schedule.lambda.1 == 1 {
        copies = copies.min(schedule.lambda.0 - 1);
    }
    if stf_is_divisible(n, m) != (copies > 0) {
        return Err(FrameError::OracleMismatch(format!(
            "closed form and schedule disagree on divisibility of STF({n}, {m})"
        )));
    }
    let rows: Vec<Vec<usize>> = (1..=n).map(|j| schedule.one_columns(j)).collect();
    let basis_indices: Vec<IndexSet> = (0..copies)
        .map(|l| rows.iter().map(|r| r[l]).collect())
        .collect();
    let used = basis_indices
        .iter()
        .fold(IndexSet::new(Vec::new()), |acc, b| acc.union(b));
    let core_indices = used.complement(m);
    let prime_core = phi.sub_frame(&core_indices)?;

    let core_m = core_indices.len();
    let core_prime = if core_m <= DEFAULT_SEARCH_CAP {
        is_prime_bruteforce(&prime_core, DEFAULT_TOL)?
    } else {
        !stf_is_divisible(n, core_m)
    };
    if !core_prime {
        return Err(FrameError::OracleMismatch(format!(
            "core of STF({n}, {m}) after removing {copies} bases is not prime"
        )));
    }
    Ok(TetrisFactorization {
        prime_core,
        basis_copies: copies,
        core_indices,
        basis_indices,
    })
}

/// Whether `STF(n, m̃)` with `n < m̃ < 2n` exists.
pub fn stf_low_redundancy_feasible(n: usize, m_tilde: usize) -> Result<bool> {
    if !(n < m_tilde && m_tilde < 2 * n) {
        return Err(FrameError::invalid(format!(
            "low-redundancy mode needs n < m < 2n, got n = {n}, m = {m_tilde}"
        )));
    }
    Ok(stf_is_divisible(n, m_tilde + n))
}

/// `STF(n, m̃)` for `n < m̃ < 2n` when feasible.
pub fn stf_low_redundancy(n: usize, m_tilde: usize) -> Result<FrameMatrix> {
    if !stf_low_redundancy_feasible(n, m_tilde)? {
        return Err(FrameError::InfeasibleTetris {
            n,
            m: m_tilde,
            detail: "the divisibility condition fails for m + n".into(),
        });
    }
    assemble(&schedule_unchecked(n, m_tilde)?)
}

/// Recurrence-only feasibility (every row count non-negative).
pub fn low_redundancy_schedule(n: usize, m_tilde: usize) -> Result<TetrisSchedule> {
    schedule_unchecked(n, m_tilde)
}
