use num_complex::Complex64;

use super::{CMatrix, FrameMatrix};
use crate::error::{FrameError, Result};

const EQUIVALENCE_TOL: f64 = 1e-9;

/// Data of a unitary equivalence `ψ_i = c_i · U · φ_{p(i)}`.
///
/// `permutation[i]` is the 0-based source column for output column `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceData {
    pub unitary_u: CMatrix,
    pub permutation: Vec<usize>,
    pub scalars_c: Vec<Complex64>,
}

impl EquivalenceData {
    pub fn identity(n: usize, m: usize) -> Self {
        EquivalenceData {
            unitary_u: CMatrix::identity(n, n),
            permutation: (0..m).collect(),
            scalars_c: vec![Complex64::new(1.0, 0.0); m],
        }
    }

    /// Checks unitarity, bijectivity and equal moduli.
    pub fn validate(&self) -> Result<()> {
        let u = &self.unitary_u;
        if u.nrows() != u.ncols() {
            return Err(FrameError::invalid("U must be square"));
        }
        let defect = (u * u.adjoint() - CMatrix::identity(u.nrows(), u.nrows())).norm();
        if defect > EQUIVALENCE_TOL {
            return Err(FrameError::invalid(format!(
                "U is not unitary (‖UU* − I‖ = {defect:.3e})"
            )));
        }
        let m = self.permutation.len();
        let mut seen = vec![false; m];
        for &p in &self.permutation {
            if p >= m || std::mem::replace(&mut seen[p], true) {
                return Err(FrameError::invalid("permutation is not a bijection"));
            }
        }
        if self.scalars_c.len() != m {
            return Err(FrameError::DimensionMismatch {
                expected: format!("{m} scalars"),
                got: format!("{}", self.scalars_c.len()),
            });
        }
        if let Some(first) = self.scalars_c.first() {
            let modulus = first.norm();
            if modulus <= 0.0 {
                return Err(FrameError::invalid("scalars must have positive modulus"));
            }
            if self
                .scalars_c
                .iter()
                .any(|c| (c.norm() - modulus).abs() > EQUIVALENCE_TOL * modulus)
            {
                return Err(FrameError::invalid("scalars must share a common modulus"));
            }
        }
        Ok(())
    }
}

/// `Ψ = U Φ P C`.
pub fn apply_equivalence(phi: &FrameMatrix, eq: &EquivalenceData) -> Result<FrameMatrix> {
    eq.validate()?;
    if eq.unitary_u.nrows() != phi.n() || eq.permutation.len() != phi.m() {
        return Err(FrameError::DimensionMismatch {
            expected: format!("U {0}x{0} and {1} columns", phi.n(), phi.m()),
            got: format!(
                "U {0}x{0} and {1} columns",
                eq.unitary_u.nrows(),
                eq.permutation.len()
            ),
        });
    }
    let rotated = &eq.unitary_u * phi.matrix();
    let data = CMatrix::from_fn(phi.n(), phi.m(), |r, i| {
        eq.scalars_c[i] * rotated[(r, eq.permutation[i])]
    });
    FrameMatrix::new(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::check_tight;
    use crate::harmonic::{htf, HtfParams};

    #[test]
    fn identity_equivalence_is_noop() {
        let phi = htf(&HtfParams::unit(2, 5)).unwrap();
        let out = apply_equivalence(&phi, &EquivalenceData::identity(2, 5)).unwrap();
        assert!(out.max_abs_diff(&phi).unwrap() < 1e-15);
    }

    #[test]
    fn diagonal_phase_shifts_harmonic_columns() {
        let phi = htf(&HtfParams::unit(2, 4)).unwrap();
        let mut eq = EquivalenceData::identity(2, 4);
        eq.unitary_u[(1, 1)] = Complex64::new(0.0, 1.0);
        let out = apply_equivalence(&phi, &eq).unwrap();
        for k in 0..4 {
            let expected = phi.column((k + 1) % 4);
            let got = out.column(k);
            for r in 0..2 {
                assert!((expected[r] - got[r]).norm() < 1e-12);
            }
        }
        assert!(check_tight(&out, 1e-9).is_tight);
    }

    #[test]
    fn invalid_data_rejected() {
        let phi = FrameMatrix::identity(2);
        let mut eq = EquivalenceData::identity(2, 2);
        eq.permutation = vec![0, 0];
        assert!(apply_equivalence(&phi, &eq).is_err());

        let mut eq = EquivalenceData::identity(2, 2);
        eq.scalars_c[1] = Complex64::new(2.0, 0.0);
        assert!(apply_equivalence(&phi, &eq).is_err());

        let mut eq = EquivalenceData::identity(2, 2);
        eq.unitary_u[(0, 1)] = Complex64::new(0.5, 0.0);
        assert!(apply_equivalence(&phi, &eq).is_err());

        let eq = EquivalenceData::identity(3, 2);
        assert!(matches!(
            apply_equivalence(&phi, &eq),
            Err(FrameError::DimensionMismatch { .. })
        ));
    }
}
