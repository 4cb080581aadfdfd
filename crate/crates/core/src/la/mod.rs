//! Sparse linear algebra: CSR storage, IC(0), a sparse LDL^T and
//! preconditioned MinRes.

pub mod ichol;
pub mod ldl;
pub mod minres;
pub mod sparse;

pub use ichol::{cholesky_solve, incomplete_cholesky, incomplete_cholesky_with, IcOptions};
pub use ldl::SparseLdl;
pub use minres::{
    apply_block_preconditioner, minres, BlockPreconditioner, IdentityPreconditioner, MinresOptions,
    MinresSolution, Preconditioner, PressureLaplacian, SaddleSystem, SolveStats,
};
pub use sparse::{dot, norm_inf, SparseMatrix, TripletBuilder};
