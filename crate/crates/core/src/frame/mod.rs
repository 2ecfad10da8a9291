//! Dense frame representation and the generic frame toolkit.
//!
//! A frame of `m` vectors in an `n`-dimensional space is stored as an `n × m`
//! complex matrix whose columns are the frame vectors. Real frames are the
//! special case where every imaginary part is exactly zero.

mod construct;
mod diagnostics;
mod equivalence;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};

pub use construct::{
    dft_row_frame, is_prime_integer, planar_roots_frame, prime_parseval_extension,
    random_tight_frame, MAX_RANDOM_RETRIES,
};
pub use diagnostics::{
    canonical_parseval, check_equiangular, check_tight, coherence, frame_operator,
    verify_reconstruction, welch_bound, EquiangularityReport, TightnessReport,
};
pub use equivalence::{apply_equivalence, EquivalenceData};
pub(crate) use diagnostics::ensure_tight;

/// Default tolerance for tightness verdicts (relative Frobenius residual).
pub const DEFAULT_TOL: f64 = 1e-9;

pub type CMatrix = DMatrix<Complex64>;

/// Scalar field of a frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

/// Sorted set of 1-based column indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Builds a set from 1-based indices; duplicates are dropped.
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        IndexSet(indices)
    }

    pub fn full(m: usize) -> Self {
        IndexSet((1..=m).collect())
    }

    /// Interprets bit `i` as index `i + 1`.
    pub fn from_mask(mask: u64) -> Self {
        let mut out = Vec::with_capacity(mask.count_ones() as usize);
        let mut rest = mask;
        while rest != 0 {
            let bit = rest.trailing_zeros() as usize;
            out.push(bit + 1);
            rest &= rest - 1;
        }
        IndexSet(out)
    }

    pub fn to_mask(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, &i| acc | (1u64 << (i - 1)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// `{1..m} \ self`.
    pub fn complement(&self, m: usize) -> Self {
        IndexSet((1..=m).filter(|i| !self.contains(*i)).collect())
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.iter().all(|i| !other.contains(i))
    }

    pub fn union(&self, other: &IndexSet) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        IndexSet::new(v)
    }

    pub(crate) fn check_range(&self, m: usize) -> Result<()> {
        match self.0.iter().find(|&&i| i == 0 || i > m) {
            Some(&bad) => Err(FrameError::invalid(format!(
                "index {bad} outside 1..={m}"
            ))),
            None => Ok(()),
        }
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        IndexSet::new(iter.into_iter().collect())
    }
}

/// An `n × m` matrix whose columns are frame vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameMatrix {
    data: CMatrix,
    field: Field,
}

impl FrameMatrix {
    /// Wraps a matrix, tagging it real when every imaginary part is zero.
    pub fn new(data: CMatrix) -> Result<Self> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return Err(FrameError::invalid(format!(
                "frame matrix must be at least 1x1, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        let field = if data.iter().all(|z| z.im == 0.0) {
            Field::Real
        } else {
            Field::Complex
        };
        Ok(FrameMatrix { data, field })
    }

    /// Wraps a matrix with an explicit field tag.
    pub fn with_field(data: CMatrix, field: Field) -> Result<Self> {
        let mut frame = Self::new(data)?;
        match (field, frame.field) {
            (Field::Real, Field::Complex) => Err(FrameError::invalid(
                "field tagged real but some imaginary parts are nonzero",
            )),
            _ => {
                frame.field = field;
                Ok(frame)
            }
        }
    }

    /// Builds a frame from column vectors.
    pub fn from_columns(n: usize, columns: &[Vec<Complex64>]) -> Result<Self> {
        if let Some(bad) = columns.iter().find(|c| c.len() != n) {
            return Err(FrameError::DimensionMismatch {
                expected: format!("columns of length {n}"),
                got: format!("column of length {}", bad.len()),
            });
        }
        let m = columns.len();
        Self::new(CMatrix::from_fn(n, m, |r, c| columns[c][r]))
    }

    /// Builds a real frame from real column vectors.
    pub fn from_real_columns(n: usize, columns: &[Vec<f64>]) -> Result<Self> {
        let cols: Vec<Vec<Complex64>> = columns
            .iter()
            .map(|c| c.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_columns(n, &cols)
    }

    /// Builds a real frame from a row-major slice.
    pub fn from_real_rows(n: usize, m: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != n * m {
            return Err(FrameError::DimensionMismatch {
                expected: format!("{} entries", n * m),
                got: format!("{} entries", rows.len()),
            });
        }
        Self::new(CMatrix::from_fn(n, m, |r, c| {
            Complex64::new(rows[r * m + c], 0.0)
        }))
    }

    pub fn identity(n: usize) -> Self {
        FrameMatrix {
            data: CMatrix::identity(n, n),
            field: Field::Real,
        }
    }

    /// Dimension of the ambient space (rows).
    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    /// Number of frame vectors (columns).
    pub fn m(&self) -> usize {
        self.data.ncols()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    /// Column `k` (0-based) as an owned vector.
    pub fn column(&self, k: usize) -> Vec<Complex64> {
        self.data.column(k).iter().copied().collect()
    }

    pub fn columns(&self) -> Vec<Vec<Complex64>> {
        (0..self.m()).map(|k| self.column(k)).collect()
    }

    /// Euclidean norms of all columns.
    pub fn column_norms(&self) -> Vec<f64> {
        self.data.column_iter().map(|c| c.norm()).collect()
    }

    /// The sub-frame on a set of 1-based indices, in index order.
    pub fn sub_frame(&self, indices: &IndexSet) -> Result<Self> {
        indices.check_range(self.m())?;
        if indices.is_empty() {
            return Err(FrameError::invalid("empty index set"));
        }
        let cols: Vec<usize> = indices.iter().map(|i| i - 1).collect();
        let data = self.data.select_columns(cols.iter());
        Ok(FrameMatrix {
            data,
            field: self.field,
        })
    }

    /// Concatenates the columns of several frames living in the same space.
    pub fn concat(parts: &[FrameMatrix]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| FrameError::invalid("nothing to concatenate"))?;
        let n = first.n();
        let mut cols = Vec::new();
        for part in parts {
            if part.n() != n {
                return Err(FrameError::DimensionMismatch {
                    expected: format!("{n} rows"),
                    got: format!("{} rows", part.n()),
                });
            }
            cols.extend(part.columns());
        }
        Self::from_columns(n, &cols)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        FrameMatrix {
            data: self.data.map(|z| z * factor),
            field: self.field,
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &FrameMatrix) -> Option<f64> {
        if self.n() != other.n() || self.m() != other.m() {
            return None;
        }
        Some(
            self.data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max),
        )
    }
}

/// `⟨x, y⟩ = Σ x_k · conj(y_k)`, linear in the first argument.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub(crate) fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
