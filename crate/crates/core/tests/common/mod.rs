#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use prime_frames::divisibility::DivisorCertificate;
use prime_frames::frame::{check_tight, CMatrix, EquivalenceData, FrameMatrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub const TOL: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..n)
        .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

/// Haar-ish unitary from the QR factor of a complex Gaussian matrix.
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = DMatrix::from_fn(n, n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    g.qr().q()
}

pub fn random_equivalence(n: usize, m: usize, rng: &mut ChaCha8Rng) -> EquivalenceData {
    let mut permutation: Vec<usize> = (0..m).collect();
    permutation.shuffle(rng);
    let modulus: f64 = rng.random_range(0.5..2.0);
    let scalars_c = (0..m)
        .map(|_| Complex64::from_polar(modulus, rng.random_range(0.0..std::f64::consts::TAU)))
        .collect();
    EquivalenceData {
        unitary_u: random_unitary(n, rng),
        permutation,
        scalars_c,
    }
}

/// Both halves of a certificate are tight and their bounds add up.
pub fn assert_certificate(phi: &FrameMatrix, cert: &DivisorCertificate) {
    let whole = check_tight(phi, TOL);
    let part = check_tight(&phi.sub_frame(&cert.subset_j).unwrap(), TOL);
    let rest = check_tight(&phi.sub_frame(&cert.subset_j.complement(phi.m())).unwrap(), TOL);
    assert!(whole.is_tight && part.is_tight && rest.is_tight, "certificate {cert:?}");
    assert_eq!(cert.size_p, cert.subset_j.len());
    assert!((part.bound_a - cert.bound_a1).abs() <= 1e-9);
    assert!((rest.bound_a - cert.complement_bound).abs() <= 1e-9);
    assert!((cert.bound_a1 + cert.complement_bound - whole.bound_a).abs() <= 1e-9);
    assert!(cert.size_p >= phi.n() && cert.size_p + phi.n() <= phi.m());
}

/// Every column of `a` matches a distinct column of `b` within `tol`.
pub fn same_column_multiset(a: &FrameMatrix, b: &FrameMatrix, tol: f64) -> bool {
    if a.n() != b.n() || a.m() != b.m() {
        return false;
    }
    let mut unused: Vec<Vec<Complex64>> = b.columns();
    for col in a.columns() {
        let hit = unused.iter().position(|other| {
            col.iter().zip(other).all(|(x, y)| (x - y).norm() <= tol)
        });
        match hit {
            Some(i) => {
                unused.swap_remove(i);
            }
            None => return false,
        }
    }
    true
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn data_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// The worked STF(4, 11) example as printed.
pub fn stf_4_11_published() -> FrameMatrix {
    let s = f64::sqrt;
    #[rustfmt::skip]
    let rows = [
        1.0, 1.0, s(3.0 / 8.0), s(3.0 / 8.0), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, s(5.0 / 8.0), -s(5.0 / 8.0), 1.0, s(0.25), s(0.25), 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, s(0.75), -s(0.75), 1.0, s(1.0 / 8.0), s(1.0 / 8.0), 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, s(7.0 / 8.0), -s(7.0 / 8.0), 1.0,
    ];
    FrameMatrix::from_real_rows(4, 11, &rows).unwrap()
}
