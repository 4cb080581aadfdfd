//! Preconditioned MinRes for the symmetric saddle-point system
//!
//! ```text
//! [ A   B ] [u]   [rhs_u]
//! [ B^T 0 ] [p] = [rhs_p]
//! ```
//!
//! The preconditioner must be symmetric positive definite. Known null vectors
//! of `B` (constant pressure modes) are removed by projecting the pressure part
//! of every preconditioned vector, which keeps the iteration symmetric and
//! leaves the returned pressure orthogonal to the deflation basis.

use crate::error::{Error, Result};
use crate::la::ichol::cholesky_solve_into;
use crate::la::ldl::SparseLdl;
use crate::la::sparse::{dot, SparseMatrix};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITERS: usize = 2000;

#[derive(Debug, Clone)]
pub struct SaddleSystem<'a> {
    pub a: SparseMatrix,
    pub b: &'a SparseMatrix,
    pub rhs_u: Vec<f64>,
    pub rhs_p: Vec<f64>,
    /// Orthonormal basis of the deflated pressure subspace.
    deflation_basis: Vec<Vec<f64>>,
}

impl<'a> SaddleSystem<'a> {
    pub fn new(
        a: SparseMatrix,
        b: &'a SparseMatrix,
        rhs_u: Vec<f64>,
        rhs_p: Vec<f64>,
        deflation_basis: &[Vec<f64>],
    ) -> Result<Self> {
        let n_u = a.n_rows();
        if a.n_cols() != n_u {
            return Err(Error::DimensionMismatch {
                context: "velocity block (square)",
                expected: n_u,
                actual: a.n_cols(),
            });
        }
        if b.n_rows() != n_u {
            return Err(Error::DimensionMismatch {
                context: "coupling block rows",
                expected: n_u,
                actual: b.n_rows(),
            });
        }
        if rhs_u.len() != n_u {
            return Err(Error::DimensionMismatch {
                context: "rhs_u",
                expected: n_u,
                actual: rhs_u.len(),
            });
        }
        let n_p = b.n_cols();
        if rhs_p.len() != n_p {
            return Err(Error::DimensionMismatch {
                context: "rhs_p",
                expected: n_p,
                actual: rhs_p.len(),
            });
        }
        // modified Gram-Schmidt
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(deflation_basis.len());
        for v in deflation_basis {
            if v.len() != n_p {
                return Err(Error::DimensionMismatch {
                    context: "deflation vector",
                    expected: n_p,
                    actual: v.len(),
                });
            }
            let mut w = v.clone();
            for q in &basis {
                let c = dot(q, &w);
                w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= c * qi);
            }
            let nrm = dot(&w, &w).sqrt();
            if nrm > 0.0 {
                w.iter_mut().for_each(|x| *x /= nrm);
                basis.push(w);
            }
        }
        Ok(Self {
            a,
            b,
            rhs_u,
            rhs_p,
            deflation_basis: basis,
        })
    }

    pub fn n_u(&self) -> usize {
        self.a.n_rows()
    }

    pub fn n_p(&self) -> usize {
        self.b.n_cols()
    }

    pub fn deflation_basis(&self) -> &[Vec<f64>] {
        &self.deflation_basis
    }

    /// Removes the deflation components of a pressure vector.
    pub fn deflate(&self, p: &mut [f64]) {
        for q in &self.deflation_basis {
            let c = dot(q, p);
            p.iter_mut().zip(q).for_each(|(pi, qi)| *pi -= c * qi);
        }
    }

    /// `out = K x` for the full block operator; `x` and `out` are `[u; p]`.
    pub fn apply(&self, x: &[f64], out: &mut [f64], scratch: &mut [f64]) {
        let n_u = self.n_u();
        let (xu, xp) = x.split_at(n_u);
        let (ou, op) = out.split_at_mut(n_u);
        self.a.spmv_into(xu, ou);
        self.b.spmv_into(xp, scratch);
        ou.iter_mut().zip(scratch.iter()).for_each(|(o, s)| *o += s);
        self.b.spmv_transpose_into(xu, op);
    }

    /// Largest entry of `K - K^T`, for symmetry checks.
    pub fn max_asymmetry(&self) -> f64 {
        // the off-diagonal blocks are transposes by construction
        self.a.max_asymmetry()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    pub final_relative_residual: f64,
    pub converged: bool,
}

pub trait Preconditioner {
    /// Applies the inverse of the (SPD) preconditioner to `[r_u; r_p]`.
    fn apply(&self, r_u: &[f64], r_p: &[f64], z_u: &mut [f64], z_p: &mut [f64]) -> Result<()>;
}

/// No preconditioning.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityPreconditioner;

impl Preconditioner for IdentityPreconditioner {
    fn apply(&self, r_u: &[f64], r_p: &[f64], z_u: &mut [f64], z_p: &mut [f64]) -> Result<()> {
        z_u.copy_from_slice(r_u);
        z_p.copy_from_slice(r_p);
        Ok(())
    }
}

/// Inertial part of the pressure block, `weight * L^{-1}` for a pressure
/// Laplacian `L`.
#[derive(Debug, Clone)]
pub struct PressureLaplacian {
    pub factor: SparseLdl,
    pub weight: f64,
}

/// `diag(L_A L_A^T, L_p L_p^T)` from two incomplete Cholesky factors. With a
/// pressure Laplacian the pressure block becomes `(L_p L_p^T)^{-1} + weight
/// L^{-1}`, which stays SPD.
#[derive(Debug, Clone)]
pub struct BlockPreconditioner {
    pub factor_a: SparseMatrix,
    pub factor_p: SparseMatrix,
    pub laplacian: Option<PressureLaplacian>,
}

impl Preconditioner for BlockPreconditioner {
    fn apply(&self, r_u: &[f64], r_p: &[f64], z_u: &mut [f64], z_p: &mut [f64]) -> Result<()> {
        if r_u.len() != self.factor_a.n_rows() {
            return Err(Error::DimensionMismatch {
                context: "velocity preconditioner",
                expected: self.factor_a.n_rows(),
                actual: r_u.len(),
            });
        }
        if r_p.len() != self.factor_p.n_rows() {
            return Err(Error::DimensionMismatch {
                context: "pressure preconditioner",
                expected: self.factor_p.n_rows(),
                actual: r_p.len(),
            });
        }
        cholesky_solve_into(&self.factor_a, r_u, z_u);
        cholesky_solve_into(&self.factor_p, r_p, z_p);
        if let Some(lap) = &self.laplacian {
            for (z, l) in z_p.iter_mut().zip(lap.factor.solve(r_p)) {
                *z += lap.weight * l;
            }
        }
        Ok(())
    }
}

pub fn apply_block_preconditioner(
    factor_a: &SparseMatrix,
    factor_mp: &SparseMatrix,
    r_u: &[f64],
    r_p: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let pc = BlockPreconditioner {
        factor_a: factor_a.clone(),
        factor_p: factor_mp.clone(),
        laplacian: None,
    };
    let mut z_u = vec![0.0; r_u.len()];
    let mut z_p = vec![0.0; r_p.len()];
    pc.apply(r_u, r_p, &mut z_u, &mut z_p)?;
    Ok((z_u, z_p))
}

#[derive(Debug, Clone, Copy)]
pub struct MinresOptions {
    /// Relative tolerance on the preconditioned residual norm.
    pub tol: f64,
    pub max_iters: usize,
    pub record_history: bool,
}

impl Default for MinresOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iters: DEFAULT_MAX_ITERS,
            record_history: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MinresSolution {
    pub u: Vec<f64>,
    pub p: Vec<f64>,
    pub stats: SolveStats,
    /// Preconditioned residual norm after each iteration (if recorded).
    pub residual_history: Vec<f64>,
}

struct Workspace<'s, 'a, P: Preconditioner + ?Sized> {
    sys: &'s SaddleSystem<'a>,
    pc: &'s P,
}

impl<P: Preconditioner + ?Sized> Workspace<'_, '_, P> {
    fn precondition(&self, r: &[f64], z: &mut [f64]) -> Result<()> {
        let n_u = self.sys.n_u();
        let (ru, rp) = r.split_at(n_u);
        let (zu, zp) = z.split_at_mut(n_u);
        self.pc.apply(ru, rp, zu, zp)?;
        self.sys.deflate(zp);
        Ok(())
    }
}

/// Solves the saddle system, optionally warm-started from `initial = (u0, p0)`.
pub fn minres<P: Preconditioner + ?Sized>(
    sys: &SaddleSystem<'_>,
    pc: &P,
    opts: MinresOptions,
    initial: Option<(&[f64], &[f64])>,
) -> Result<MinresSolution> {
    if !(opts.tol > 0.0) {
        return Err(Error::Argument(format!(
            "MinRes tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let n_u = sys.n_u();
    let n = n_u + sys.n_p();
    let ws = Workspace { sys, pc };

    let mut b = Vec::with_capacity(n);
    b.extend_from_slice(&sys.rhs_u);
    b.extend_from_slice(&sys.rhs_p);

    let mut x = vec![0.0; n];
    if let Some((u0, p0)) = initial {
        if u0.len() != n_u || p0.len() != sys.n_p() {
            return Err(Error::DimensionMismatch {
                context: "MinRes initial guess",
                expected: n,
                actual: u0.len() + p0.len(),
            });
        }
        x[..n_u].copy_from_slice(u0);
        x[n_u..].copy_from_slice(p0);
        sys.deflate(&mut x[n_u..]);
    }

    let mut scratch = vec![0.0; n_u];
    let mut y = vec![0.0; n];
    ws.precondition(&b, &mut y)?;
    let b_norm_sq = dot(&b, &y);
    if b_norm_sq.is_nan() {
        return Err(Error::Divergence { iteration: 0 });
    }
    let mut history = Vec::new();
    if !(b_norm_sq > 0.0) {
        // zero right-hand side: the minimum-norm solution is zero
        return Ok(MinresSolution {
            u: vec![0.0; n_u],
            p: vec![0.0; sys.n_p()],
            stats: SolveStats {
                iterations: 0,
                final_relative_residual: 0.0,
                converged: true,
            },
            residual_history: history,
        });
    }
    let b_norm = b_norm_sq.sqrt();

    // r1 = b - K x0
    let mut r1 = vec![0.0; n];
    sys.apply(&x, &mut r1, &mut scratch);
    r1.iter_mut().zip(&b).for_each(|(r, bi)| *r = bi - *r);
    ws.precondition(&r1, &mut y)?;
    let beta1_sq = dot(&r1, &y);
    if beta1_sq < 0.0 {
        return Err(Error::IndefinitePreconditioner {
            iteration: 0,
            value: beta1_sq,
        });
    }
    let beta1 = beta1_sq.sqrt();
    let mut stats = SolveStats {
        iterations: 0,
        final_relative_residual: beta1 / b_norm,
        converged: beta1 <= opts.tol * b_norm,
    };
    if stats.converged {
        let p = x.split_off(n_u);
        return Ok(MinresSolution {
            u: x,
            p,
            stats,
            residual_history: history,
        });
    }

    let mut r2 = r1.clone();
    let mut v = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut w1 = vec![0.0; n];
    let mut w2 = vec![0.0; n];

    let mut oldb = 0.0;
    let mut beta = beta1;
    let mut dbar = 0.0;
    let mut epsln = 0.0;
    let mut phibar = beta1;
    let mut cs = -1.0;
    let mut sn = 0.0;

    for itn in 1..=opts.max_iters {
        let s = 1.0 / beta;
        v.iter_mut().zip(&y).for_each(|(vi, yi)| *vi = s * yi);
        sys.apply(&v, &mut y, &mut scratch);
        if itn >= 2 {
            let c = beta / oldb;
            y.iter_mut().zip(&r1).for_each(|(yi, ri)| *yi -= c * ri);
        }
        let alfa = dot(&v, &y);
        let c = alfa / beta;
        y.iter_mut().zip(&r2).for_each(|(yi, ri)| *yi -= c * ri);
        std::mem::swap(&mut r1, &mut r2);
        r2.copy_from_slice(&y);
        ws.precondition(&r2, &mut y)?;
        oldb = beta;
        let beta_sq = dot(&r2, &y);
        if beta_sq.is_nan() {
            return Err(Error::Divergence { iteration: itn });
        }
        if beta_sq < 0.0 {
            // tolerate round-off once the Krylov space is exhausted
            if beta_sq.abs() > 1e-14 * b_norm_sq {
                return Err(Error::IndefinitePreconditioner {
                    iteration: itn,
                    value: beta_sq,
                });
            }
        }
        beta = beta_sq.max(0.0).sqrt();

        let oldeps = epsln;
        let delta = cs * dbar + sn * alfa;
        let gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        let gamma = gbar.hypot(beta).max(f64::EPSILON);
        cs = gbar / gamma;
        sn = beta / gamma;
        let phi = cs * phibar;
        phibar *= sn;

        let denom = 1.0 / gamma;
        std::mem::swap(&mut w1, &mut w2);
        std::mem::swap(&mut w2, &mut w);
        for k in 0..n {
            w[k] = (v[k] - oldeps * w1[k] - delta * w2[k]) * denom;
            x[k] += phi * w[k];
        }

        if !phibar.is_finite() || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { iteration: itn });
        }
        if opts.record_history {
            history.push(phibar);
        }
        stats.iterations = itn;
        stats.final_relative_residual = phibar / b_norm;
        if phibar <= opts.tol * b_norm || beta == 0.0 {
            stats.converged = phibar <= opts.tol * b_norm;
            if beta == 0.0 {
                stats.converged = true;
            }
            break;
        }
    }

    let p = x.split_off(n_u);
    Ok(MinresSolution {
        u: x,
        p,
        stats,
        residual_history: history,
    })
}
