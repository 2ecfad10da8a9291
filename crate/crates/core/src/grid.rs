//! Bulk comparison of closed-form verdicts with brute-force search.

use rayon::prelude::*;
use serde::Serialize;

use crate::divisibility::{is_prime_bruteforce_with, SearchOptions};
use crate::error::{FrameError, Result};
use crate::harmonic::{htf, htf_is_prime, HtfParams};
use crate::tetris::{stf, stf_is_divisible, stf_low_redundancy_feasible};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridRow {
    pub n: usize,
    pub m: usize,
    pub htf_prime: bool,
    pub htf_prime_bruteforce: bool,
    /// Only for `m ≥ 2n`.
    pub stf_divisible: Option<bool>,
    pub stf_divisible_bruteforce: Option<bool>,
    /// Only for `n < m < 2n`.
    pub stf_low_redundancy_feasible: Option<bool>,
}

/// One row per `2 ≤ n ≤ n_max`, `n ≤ m ≤ m_max`. Any disagreement between
/// a closed form and the search is an error.
pub fn grid_report(n_max: usize, m_max: usize, opts: &SearchOptions) -> Result<Vec<GridRow>> {
    let cells: Vec<(usize, usize)> = (2..=n_max)
        .flat_map(|n| (n..=m_max).map(move |m| (n, m)))
        .collect();
    if let Some(&(_, m)) = cells.iter().max_by_key(|c| c.1) {
        opts.check_size(m)?;
    }
    cells
        .into_par_iter()
        .map(|(n, m)| grid_row(n, m, opts))
        .collect()
}

fn grid_row(n: usize, m: usize, opts: &SearchOptions) -> Result<GridRow> {
    let htf_prime = htf_is_prime(n, m);
    let htf_prime_bruteforce = is_prime_bruteforce_with(&htf(&HtfParams::unit(n, m))?, opts)?;
    if htf_prime != htf_prime_bruteforce {
        return Err(FrameError::OracleMismatch(format!(
            "HTF({n}, {m}): closed form says prime = {htf_prime}, search says {htf_prime_bruteforce}"
        )));
    }
    let (stf_divisible, stf_divisible_bruteforce) = if m >= 2 * n {
        let closed = stf_is_divisible(n, m);
        let brute = !is_prime_bruteforce_with(&stf(n, m)?, opts)?;
        if closed != brute {
            return Err(FrameError::OracleMismatch(format!(
                "STF({n}, {m}): closed form says divisible = {closed}, search says {brute}"
            )));
        }
        (Some(closed), Some(brute))
    } else {
        (None, None)
    };
    let low = if n < m && m < 2 * n {
        Some(stf_low_redundancy_feasible(n, m)?)
    } else {
        None
    };
    Ok(GridRow {
        n,
        m,
        htf_prime,
        htf_prime_bruteforce,
        stf_divisible,
        stf_divisible_bruteforce,
        stf_low_redundancy_feasible: low,
    })
}
