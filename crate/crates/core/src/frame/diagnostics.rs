use num_complex::Complex64;
use serde::Serialize;

use super::{inner, vec_norm, CMatrix, FrameMatrix};
use crate::error::{FrameError, Result};

/// Verdict of a tightness test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TightnessReport {
    pub is_tight: bool,
    /// Fitted bound `trace(ΦΦ*) / n`.
    pub bound_a: f64,
    /// `‖ΦΦ* − A·I‖_F / ‖ΦΦ*‖_F`.
    pub residual: f64,
    pub tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EquiangularityReport {
    pub is_unit_norm: bool,
    pub is_equiangular: bool,
    pub common_angle_c: f64,
    pub max_abs_inner: f64,
    pub welch_bound: f64,
}

/// The frame operator `S = ΦΦ*`.
pub fn frame_operator(phi: &FrameMatrix) -> CMatrix {
    let a = phi.matrix();
    a * a.adjoint()
}

pub fn check_tight(phi: &FrameMatrix, tol: f64) -> TightnessReport {
    let s = frame_operator(phi);
    let n = phi.n();
    let bound_a = s.trace().re / n as f64;
    let total = s.norm();
    let residual = if total > 0.0 {
        let mut dev = s;
        for i in 0..n {
            dev[(i, i)] -= Complex64::new(bound_a, 0.0);
        }
        dev.norm() / total
    } else {
        1.0
    };
    TightnessReport {
        is_tight: residual <= tol && bound_a > tol,
        bound_a,
        residual,
        tol,
    }
}

fn require_tight(phi: &FrameMatrix, tol: f64) -> Result<TightnessReport> {
    let report = check_tight(phi, tol);
    if report.is_tight {
        Ok(report)
    } else {
        Err(FrameError::NotTight {
            residual: report.residual,
            bound: report.bound_a,
        })
    }
}

pub(crate) fn ensure_tight(phi: &FrameMatrix, tol: f64) -> Result<TightnessReport> {
    require_tight(phi, tol)
}

/// Checks `x = (1/A) Φ Φ* x` for a tight frame.
pub fn verify_reconstruction(phi: &FrameMatrix, x: &[Complex64], tol: f64) -> Result<bool> {
    let report = require_tight(phi, tol)?;
    if x.len() != phi.n() {
        return Err(FrameError::DimensionMismatch {
            expected: format!("vector of length {}", phi.n()),
            got: format!("length {}", x.len()),
        });
    }
    let a = phi.matrix();
    let xv = nalgebra::DVector::from_column_slice(x);
    let coeffs = a.adjoint() * &xv;
    let back = (a * coeffs).unscale(report.bound_a);
    let err = (back - &xv).norm();
    Ok(err <= tol * vec_norm(x))
}

/// `S^{-1/2} Φ`; a tight input is simply rescaled by `1/√A`.
pub fn canonical_parseval(phi: &FrameMatrix) -> Result<FrameMatrix> {
    let report = check_tight(phi, super::DEFAULT_TOL);
    if report.is_tight {
        return Ok(phi.scaled(1.0 / report.bound_a.sqrt()));
    }
    let s = frame_operator(phi);
    let eig = s.symmetric_eigen();
    let max_ev = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let min_ev = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if max_ev <= 0.0 || min_ev <= 1e-12 * max_ev {
        return Err(FrameError::NotAFrame {
            min_eigenvalue: min_ev,
        });
    }
    let inv_sqrt = eig
        .eigenvalues
        .map(|ev| Complex64::new(1.0 / ev.sqrt(), 0.0));
    let v = &eig.eigenvectors;
    let root = v * CMatrix::from_diagonal(&inv_sqrt) * v.adjoint();
    let mut data = root * phi.matrix();
    if phi.field() == super::Field::Real {
        // S^{-1/2} of a real frame is real; drop rounding noise.
        data.iter_mut().for_each(|z| z.im = 0.0);
    }
    FrameMatrix::with_field(data, phi.field())
}

/// Maximum `|⟨φ_k, φ_ℓ⟩|` over distinct pairs; zero when `m < 2`.
pub fn coherence(phi: &FrameMatrix) -> f64 {
    let cols = phi.columns();
    let mut best = 0.0f64;
    for k in 0..cols.len() {
        for l in (k + 1)..cols.len() {
            best = best.max(inner(&cols[k], &cols[l]).norm());
        }
    }
    best
}

/// `√((m − n) / (n (m − 1)))`, or 0 when `m ≤ n` or `m < 2`.
pub fn welch_bound(n: usize, m: usize) -> f64 {
    if m <= n || m < 2 {
        return 0.0;
    }
    ((m - n) as f64 / (n as f64 * (m - 1) as f64)).sqrt()
}

pub fn check_equiangular(phi: &FrameMatrix, tol: f64) -> EquiangularityReport {
    let cols = phi.columns();
    let is_unit_norm = cols.iter().all(|c| (vec_norm(c) - 1.0).abs() <= tol);
    let mut values = Vec::new();
    for k in 0..cols.len() {
        for l in (k + 1)..cols.len() {
            values.push(inner(&cols[k], &cols[l]).norm());
        }
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let mean = if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    };
    EquiangularityReport {
        is_unit_norm,
        is_equiangular: is_unit_norm && !values.is_empty() && hi - lo <= tol,
        common_angle_c: mean,
        max_abs_inner: hi,
        welch_bound: welch_bound(phi.n(), phi.m()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{planar_roots_frame, IndexSet};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn frame_operator_of_basis_and_pile_up() {
        let s = frame_operator(&FrameMatrix::identity(2));
        assert_eq!(s, CMatrix::identity(2, 2));
        let pile = FrameMatrix::from_real_columns(2, &[vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let s = frame_operator(&pile);
        assert_eq!(s[(0, 0)], c(2.0));
        assert_eq!(s[(1, 1)], c(0.0));
        assert_eq!(s[(0, 1)], c(0.0));
    }

    #[test]
    fn identity_is_tight_with_bound_one() {
        let r = check_tight(&FrameMatrix::identity(3), 1e-9);
        assert!(r.is_tight);
        assert!((r.bound_a - 1.0).abs() < 1e-15);
    }

    #[test]
    fn skewed_frame_is_not_tight() {
        // S = [[3/2, 1/2], [1/2, 3/2]]: residual = (1/√2) / √5.
        let phi = FrameMatrix::from_real_columns(
            2,
            &[vec![1.0, 0.0], vec![0.0, 1.0], vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2]],
        )
        .unwrap();
        let r = check_tight(&phi, 1e-9);
        assert!(!r.is_tight);
        assert!((r.bound_a - 1.5).abs() < 1e-12);
        assert!((r.residual - (0.5f64 / 5.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn zero_frame_is_not_tight() {
        let z = FrameMatrix::new(CMatrix::zeros(2, 3)).unwrap();
        assert!(!check_tight(&z, 1e-9).is_tight);
    }

    #[test]
    fn reconstruction_rejects_non_tight() {
        let phi = FrameMatrix::from_real_columns(2, &[vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert!(verify_reconstruction(&phi, &[c(1.0), c(0.0)], 1e-9).is_err());
        let id = FrameMatrix::identity(2);
        assert!(verify_reconstruction(&id, &[c(0.3), c(-2.0)], 1e-12).unwrap());
        assert!(verify_reconstruction(&id, &[c(0.3)], 1e-12).is_err());
    }

    #[test]
    fn canonical_parseval_of_scaled_identity() {
        let phi = FrameMatrix::identity(2).scaled(2.0);
        let psi = canonical_parseval(&phi).unwrap();
        assert!(psi.max_abs_diff(&FrameMatrix::identity(2)).unwrap() < 1e-15);
    }

    #[test]
    fn canonical_parseval_of_skewed_frame() {
        let phi = FrameMatrix::from_real_columns(
            2,
            &[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
        )
        .unwrap();
        let psi = canonical_parseval(&phi).unwrap();
        let s = frame_operator(&psi);
        assert!((s - CMatrix::identity(2, 2)).norm() < 1e-12);
        assert!(check_tight(&psi, 1e-10).is_tight);
    }

    #[test]
    fn canonical_parseval_rejects_rank_deficient() {
        let phi = FrameMatrix::from_real_columns(2, &[vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
        assert!(matches!(
            canonical_parseval(&phi),
            Err(FrameError::NotAFrame { .. })
        ));
    }

    #[test]
    fn welch_bound_values() {
        assert!((welch_bound(2, 3) - 0.5).abs() < 1e-15);
        assert_eq!(welch_bound(4, 4), 0.0);
        assert!((welch_bound(2, 4) - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn coherence_of_basis_and_repeats() {
        assert_eq!(coherence(&FrameMatrix::identity(4)), 0.0);
        let rep = FrameMatrix::from_real_columns(2, &[vec![0.6, 0.8], vec![1.0, 0.0], vec![0.6, 0.8]])
            .unwrap();
        assert!((coherence(&rep) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mercedes_benz_is_equiangular_at_welch() {
        let mb = planar_roots_frame(3);
        let r = check_equiangular(&mb, 1e-12);
        assert!(r.is_unit_norm && r.is_equiangular);
        assert!((r.common_angle_c - 0.5).abs() < 1e-12);
        assert!((r.common_angle_c - r.welch_bound).abs() < 1e-12);
    }

    #[test]
    fn basis_is_equiangular_with_zero_angle() {
        let r = check_equiangular(&FrameMatrix::identity(3), 1e-12);
        assert!(r.is_equiangular);
        assert_eq!(r.common_angle_c, 0.0);
    }

    #[test]
    fn sub_frame_of_hexagon_pairs() {
        let hex = planar_roots_frame(6);
        let pair = hex.sub_frame(&IndexSet::new(vec![1, 4])).unwrap();
        assert!(!check_tight(&pair, 1e-9).is_tight);
    }
}
