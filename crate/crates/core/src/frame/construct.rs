use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{CMatrix, FrameMatrix};
use crate::error::{FrameError, Result};

/// Redraws allowed after a numerically rank-deficient Gaussian sample.
pub const MAX_RANDOM_RETRIES: u32 = 8;

/// Relative row norm below which a draw is treated as rank deficient.
const RANK_EPS: f64 = 1e-10;

/// Trial-division primality test.
pub fn is_prime_integer(k: usize) -> bool {
    if k < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= k {
        if k % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The `m` unit vectors `(cos 2πk/m, sin 2πk/m)` in the real plane.
///
/// `m = 3` is the Mercedes-Benz frame, `m = 6` the hexagon frame.
pub fn planar_roots_frame(m: usize) -> FrameMatrix {
    let cols: Vec<Vec<f64>> = (0..m)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / m as f64;
            vec![t.cos(), t.sin()]
        })
        .collect();
    FrameMatrix::from_real_columns(2, &cols).expect("m >= 1 columns of length 2")
}

/// Parseval frame from orthonormalized Gaussian rows.
///
/// Rows of an `n × m` standard Gaussian matrix are orthonormalized with
/// modified Gram-Schmidt plus one reorthogonalization pass. The result is
/// bit-reproducible for a fixed `(n, m, seed)`.
pub fn random_tight_frame(n: usize, m: usize, seed: u64) -> Result<FrameMatrix> {
    if n == 0 || m < n {
        return Err(FrameError::invalid(format!(
            "random tight frame needs m >= n >= 1, got n = {n}, m = {m}"
        )));
    }
    for attempt in 0..=MAX_RANDOM_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        let mut rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..m).map(|_| StandardNormal.sample(&mut rng)).collect())
            .collect();
        if orthonormalize_rows(&mut rows) {
            let data = CMatrix::from_fn(n, m, |r, c| Complex64::new(rows[r][c], 0.0));
            return FrameMatrix::new(data);
        }
    }
    Err(FrameError::RankDeficientDraw {
        attempts: MAX_RANDOM_RETRIES + 1,
    })
}

/// In-place MGS with reorthogonalization; false if some row collapses.
fn orthonormalize_rows(rows: &mut [Vec<f64>]) -> bool {
    for r in 0..rows.len() {
        let original = norm(&rows[r]);
        if original == 0.0 {
            return false;
        }
        for _pass in 0..2 {
            for q in 0..r {
                let proj: f64 = rows[r].iter().zip(&rows[q]).map(|(a, b)| a * b).sum();
                let (done, rest) = rows.split_at_mut(r);
                for (x, y) in rest[0].iter_mut().zip(&done[q]) {
                    *x -= proj * y;
                }
            }
        }
        let len = norm(&rows[r]);
        if len <= RANK_EPS * original {
            return false;
        }
        rows[r].iter_mut().for_each(|x| *x /= len);
    }
    true
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// A prime Parseval frame of `m` non-zero vectors in dimension `n`.
///
/// Starts from the constant Parseval row of length `m − n + 1` in dimension
/// one, then `n − 1` times appends a zero row and the new standard basis
/// vector as an extra column.
pub fn prime_parseval_extension(n: usize, m: usize) -> Result<FrameMatrix> {
    if n == 0 || m < n {
        return Err(FrameError::invalid(format!(
            "prime Parseval extension needs m >= n >= 1, got n = {n}, m = {m}"
        )));
    }
    let base = m - n + 1;
    let weight = 1.0 / (base as f64).sqrt();
    let data = CMatrix::from_fn(n, m, |r, c| {
        let value = if c < base {
            if r == 0 {
                weight
            } else {
                0.0
            }
        } else if r == c - base + 1 {
            1.0
        } else {
            0.0
        };
        Complex64::new(value, 0.0)
    });
    FrameMatrix::new(data)
}

/// First `n` rows of the `m × m` unitary DFT with unit-norm columns, `m` prime.
pub fn dft_row_frame(n: usize, m_prime: usize) -> Result<FrameMatrix> {
    if n == 0 {
        return Err(FrameError::invalid("n must be at least 1"));
    }
    if !is_prime_integer(m_prime) {
        return Err(FrameError::invalid(format!("{m_prime} is not prime")));
    }
    if m_prime < 2 * n {
        return Err(FrameError::invalid(format!(
            "need a prime m >= 2n = {}, got {m_prime}",
            2 * n
        )));
    }
    let scale = 1.0 / (n as f64).sqrt();
    let data = CMatrix::from_fn(n, m_prime, |j, k| {
        let e = (j * k) % m_prime;
        Complex64::from_polar(scale, -2.0 * PI * e as f64 / m_prime as f64)
    });
    FrameMatrix::new(data)
}
