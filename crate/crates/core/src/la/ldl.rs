//! Sparse direct LDL^T factorization, for matrices that are factored once
//! per run and applied many times.

use sprs::{CsMat, PermOwned, SymmetryCheck};
use sprs_ldl::{LdlNumeric, LdlSymbolic};

use crate::error::{Error, Result};
use crate::la::sparse::SparseMatrix;

/// LDL^T of a symmetric matrix under an approximate minimum degree ordering.
#[derive(Debug, Clone)]
pub struct SparseLdl {
    factor: LdlNumeric<f64, usize>,
}

impl SparseLdl {
    pub fn factor(m: &SparseMatrix) -> Result<Self> {
        let n = m.n_rows();
        if m.n_cols() != n {
            return Err(Error::DimensionMismatch {
                context: "LDL factorization (square matrix)",
                expected: n,
                actual: m.n_cols(),
            });
        }
        let csr = CsMat::try_new(
            (n, n),
            m.row_offsets().to_vec(),
            m.col_indices().to_vec(),
            m.values().to_vec(),
        )
        .map_err(|(_, _, _, e)| Error::Factorization(e.to_string()))?;
        let (perm, _, _) = amd::order(
            n,
            m.row_offsets(),
            m.col_indices(),
            &amd::Control::default(),
        )
        .map_err(|e| Error::Factorization(format!("ordering failed: {e:?}")))?;
        let factor = LdlSymbolic::new_perm(
            csr.view(),
            PermOwned::new(perm),
            SymmetryCheck::DontCheckSymmetry,
        )
        .factor(csr.view())
        .map_err(|e| Error::Factorization(e.to_string()))?;
        if let Some(d) = factor.d().iter().find(|d| !(d.is_finite() && **d != 0.0)) {
            return Err(Error::Factorization(format!(
                "zero or non-finite pivot {d}"
            )));
        }
        Ok(Self { factor })
    }

    pub fn n(&self) -> usize {
        self.factor.problem_size()
    }

    /// Entries stored in the triangular factor.
    pub fn nnz(&self) -> usize {
        self.factor.nnz()
    }

    pub fn solve(&self, r: &[f64]) -> Vec<f64> {
        self.factor.solve(r)
    }
}
