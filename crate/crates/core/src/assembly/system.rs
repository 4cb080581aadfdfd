use crate::assembly::dofmap::DofMap;
use crate::assembly::fluid::FluidMatrices;
use crate::assembly::params::{ModelParams, Scheme};
use crate::error::Result;
use crate::la::ichol::{incomplete_cholesky_with, IcOptions};
use crate::la::ldl::SparseLdl;
use crate::la::minres::{BlockPreconditioner, PressureLaplacian, SaddleSystem};
use crate::la::sparse::SparseMatrix;

/// `(c/dt) rho_f M0 + K`; also the velocity block of the preconditioner.
pub fn fluid_operator(
    fluid: &FluidMatrices,
    params: &ModelParams,
    dt: f64,
    scheme: Scheme,
) -> Result<SparseMatrix> {
    fluid
        .m0
        .add_scaled(scheme.c() / dt * params.rho_f, &fluid.k, 1.0)
}

/// `af + D^T S D`.
pub fn compose_velocity_block(
    af: &SparseMatrix,
    d: &SparseMatrix,
    s: &SparseMatrix,
) -> Result<SparseMatrix> {
    let sd = s.matmul(d)?;
    let dtsd = d.transpose().matmul(&sd)?;
    af.add_scaled(1.0, &dtsd, 1.0)
}

/// Saddle system with the pressure null space of the element family attached.
pub fn compose_system<'a>(
    a: SparseMatrix,
    fluid: &'a FluidMatrices,
    dofs: &DofMap,
    rhs_u: Vec<f64>,
) -> Result<SaddleSystem<'a>> {
    let n_p = fluid.b.n_cols();
    SaddleSystem::new(a, &fluid.b, rhs_u, vec![0.0; n_p], &dofs.deflation_basis())
}

/// Block-diagonal preconditioner. The velocity block is IC(0) of `af`. The
/// pressure block approximates the inverse Schur complement as
/// `nu_f Mp^{-1} + (c/dt) rho_f L^{-1}`, with `L = B^T diag(M0)^{-1} B`
/// factored exactly once. The viscous term alone misses the inertial part of
/// the Schur complement, which dominates at desk-scale time steps. The
/// enriched Gram matrix is singular along the difference of the two constant
/// modes, so its pivots are lifted; `L` is shifted by a tiny multiple of its
/// diagonal along the same null space, which deflation removes afterwards.
pub fn block_preconditioner(
    af: &SparseMatrix,
    fluid: &FluidMatrices,
    params: &ModelParams,
    dt: f64,
    scheme: Scheme,
) -> Result<BlockPreconditioner> {
    let factor_a = incomplete_cholesky_with(af, IcOptions::lifted())?;
    let mp = fluid.mp.scaled(1.0 / params.nu_f);
    let factor_p = incomplete_cholesky_with(&mp, IcOptions::lifted())?;
    let laplacian = PressureLaplacian {
        factor: SparseLdl::factor(&pressure_laplacian(fluid)?)?,
        weight: scheme.c() / dt * params.rho_f,
    };
    Ok(BlockPreconditioner {
        factor_a,
        factor_p,
        laplacian: Some(laplacian),
    })
}

/// `B^T diag(M0)^{-1} B + 1e-6 diag(...)`.
pub fn pressure_laplacian(fluid: &FluidMatrices) -> Result<SparseMatrix> {
    let mut scaled_b = fluid.b.clone();
    let offsets = scaled_b.row_offsets().to_vec();
    let diag = fluid.m0.diagonal();
    let values = scaled_b.values_mut();
    for (i, d) in diag.iter().enumerate() {
        values[offsets[i]..offsets[i + 1]]
            .iter_mut()
            .for_each(|v| *v /= d);
    }
    let l = fluid.b.transpose().matmul(&scaled_b)?;
    let n = l.n_rows();
    let shift: Vec<_> = l
        .diagonal()
        .iter()
        .enumerate()
        .map(|(i, d)| (i, i, 1e-6 * d))
        .collect();
    l.add_scaled(1.0, &SparseMatrix::from_triplets(n, n, &shift)?, 1.0)
}
