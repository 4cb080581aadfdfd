//! Zero-fill incomplete Cholesky, IC(0).
//!
//! The factor `L` keeps exactly the lower-triangular pattern of the input, with
//! the diagonal stored as the last entry of every row. For a matrix presented
//! with its full dense pattern the factor is the exact Cholesky factor.

use crate::error::{Error, Result};
use crate::la::sparse::SparseMatrix;

/// Pivot floor used by the solver preconditioners, relative to the row diagonal.
pub const DEFAULT_PIVOT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default)]
pub struct IcOptions {
    /// When set, pivots are lifted to `max(pivot, floor * a_ii)` instead of failing.
    pub pivot_floor: Option<f64>,
}

impl IcOptions {
    pub fn lifted() -> Self {
        Self {
            pivot_floor: Some(DEFAULT_PIVOT_FLOOR),
        }
    }
}

/// Strict IC(0): a non-positive pivot is an error.
pub fn incomplete_cholesky(m: &SparseMatrix) -> Result<SparseMatrix> {
    incomplete_cholesky_with(m, IcOptions::default())
}

pub fn incomplete_cholesky_with(m: &SparseMatrix, opts: IcOptions) -> Result<SparseMatrix> {
    if m.n_rows() != m.n_cols() {
        return Err(Error::DimensionMismatch {
            context: "incomplete_cholesky (square)",
            expected: m.n_rows(),
            actual: m.n_cols(),
        });
    }
    let mut l = m.lower_triangle();
    let n = l.n_rows();
    let offsets = l.row_offsets().to_vec();
    let cols = l.col_indices().to_vec();
    let vals = l.values_mut();

    for i in 0..n {
        let (lo, hi) = (offsets[i], offsets[i + 1]);
        if hi == lo || cols[hi - 1] != i {
            return Err(Error::FactorizationBreakdown { row: i, pivot: 0.0 });
        }
        let a_ii = vals[hi - 1];
        for p in lo..hi - 1 {
            let j = cols[p];
            // row j without its diagonal
            let (jlo, jhi) = (offsets[j], offsets[j + 1] - 1);
            let mut s = vals[p];
            let (mut a, mut b) = (lo, jlo);
            while a < p && b < jhi {
                let (ca, cb) = (cols[a], cols[b]);
                if ca == cb {
                    s -= vals[a] * vals[b];
                    a += 1;
                    b += 1;
                } else if ca < cb {
                    a += 1;
                } else {
                    b += 1;
                }
            }
            vals[p] = s / vals[jhi];
        }
        let mut pivot = a_ii;
        for p in lo..hi - 1 {
            pivot -= vals[p] * vals[p];
        }
        let pivot = match opts.pivot_floor {
            Some(floor) if a_ii > 0.0 => {
                let lifted = floor * a_ii;
                if pivot.is_nan() || pivot < lifted {
                    lifted
                } else {
                    pivot
                }
            }
            _ => pivot,
        };
        if !(pivot > 0.0) || !pivot.is_finite() {
            return Err(Error::FactorizationBreakdown { row: i, pivot });
        }
        vals[hi - 1] = pivot.sqrt();
    }
    Ok(l)
}

/// Solves `L L^T z = r` with a factor produced by [`incomplete_cholesky`].
pub fn cholesky_solve_into(l: &SparseMatrix, r: &[f64], z: &mut [f64]) {
    let n = l.n_rows();
    debug_assert_eq!(r.len(), n);
    debug_assert_eq!(z.len(), n);
    let offsets = l.row_offsets();
    let cols = l.col_indices();
    let vals = l.values();
    // forward: L y = r
    for i in 0..n {
        let (lo, hi) = (offsets[i], offsets[i + 1] - 1);
        let mut s = r[i];
        for k in lo..hi {
            s -= vals[k] * z[cols[k]];
        }
        z[i] = s / vals[hi];
    }
    // backward: L^T z = y, column sweep over the rows of L
    for i in (0..n).rev() {
        let (lo, hi) = (offsets[i], offsets[i + 1] - 1);
        let zi = z[i] / vals[hi];
        z[i] = zi;
        for k in lo..hi {
            z[cols[k]] -= vals[k] * zi;
        }
    }
}

pub fn cholesky_solve(l: &SparseMatrix, r: &[f64]) -> Result<Vec<f64>> {
    if r.len() != l.n_rows() {
        return Err(Error::DimensionMismatch {
            context: "cholesky_solve",
            expected: l.n_rows(),
            actual: r.len(),
        });
    }
    let mut z = vec![0.0; r.len()];
    cholesky_solve_into(l, r, &mut z);
    Ok(z)
}
