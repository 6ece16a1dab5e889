//! Dense real-symmetric operators.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::reduced::ReducedBasis;

/// Which space an operator acts on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisTag {
    /// One coordinate per vertex.
    Full,
    /// The invariant subspace spanned by the vertex-class states.
    Reduced(ReducedBasis),
}

/// Dense real-symmetric matrix, stored row-major.
///
/// Every constructor mirrors the upper triangle, so `get(i, j) == get(j, i)`
/// holds bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    dim: usize,
    entries: Vec<f64>,
    basis: BasisTag,
}

impl HermitianOperator {
    /// Builds an operator from `f(i, j)` evaluated on the upper triangle.
    pub fn from_upper(dim: usize, basis: BasisTag, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                entries[i * dim + j] = v;
                entries[j * dim + i] = v;
            }
        }
        Self { dim, entries, basis }
    }

    pub fn zeros(dim: usize, basis: BasisTag) -> Self {
        Self { dim, entries: vec![0.0; dim * dim], basis }
    }

    pub fn identity(dim: usize, basis: BasisTag) -> Self {
        Self::from_upper(dim, basis, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn diagonal(values: &[f64], basis: BasisTag) -> Self {
        Self::from_upper(values.len(), basis, |i, j| if i == j { values[i] } else { 0.0 })
    }

    /// Builds an operator from a full row-major array, rejecting asymmetric input.
    pub fn from_rows(rows: &[Vec<f64>], basis: BasisTag) -> Result<Self> {
        let dim = rows.len();
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: row.len() });
            }
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self::from_upper(dim, basis, |i, j| rows[i][j]))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn basis(&self) -> &BasisTag {
        &self.basis
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|v| v * factor).collect(),
            basis: self.basis.clone(),
        }
    }

    /// Entrywise `self + factor * other`. The basis of `self` is kept.
    pub fn add_scaled(&self, other: &Self, factor: f64) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: other.dim });
        }
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + factor * b)
                .collect(),
            basis: self.basis.clone(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Vec<Vec<f64>>> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: other.dim });
        }
        let n = self.dim;
        Ok((0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum())
                    .collect()
            })
            .collect())
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim, "vector length must match operator dimension");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn apply_complex(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim, "vector length must match operator dimension");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| b * *a).sum())
            .collect()
    }

    /// `<x|H|x>` for a complex vector.
    pub fn expectation(&self, x: &[Complex64]) -> f64 {
        let hx = self.apply_complex(x);
        x.iter().zip(&hx).map(|(a, b)| (a.conj() * b).re).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_upper_is_symmetric() {
        let op = HermitianOperator::from_upper(5, BasisTag::Full, |i, j| (i * 7 + j) as f64 * 0.1);
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(op.get(i, j), op.get(j, i));
            }
        }
    }

    #[test]
    fn from_rows_rejects_asymmetric() {
        let rows = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert!(HermitianOperator::from_rows(&rows, BasisTag::Full).is_err());
        let rows = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let op = HermitianOperator::from_rows(&rows, BasisTag::Full).unwrap();
        assert_eq!(op.apply(&[1.0, 0.0]), vec![0.0, 1.0]);
    }

    #[test]
    fn expectation_of_real_vector() {
        let op = HermitianOperator::diagonal(&[1.0, -2.0], BasisTag::Full);
        let x = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        assert!((op.expectation(&x) - (0.36 - 2.0 * 0.64)).abs() < 1e-15);
    }
}
