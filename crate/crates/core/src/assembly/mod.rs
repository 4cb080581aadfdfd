//! Global matrices and right-hand sides of the coupled saddle-point system.

pub mod dofmap;
pub mod fluid;
pub mod params;
pub mod rhs;
pub mod solid;
pub mod system;

pub use dofmap::{BoundaryKind, DofMap, ElementKind};
pub use fluid::{assemble_fluid, FluidMatrices};
pub use params::{ModelParams, Scheme};
pub use rhs::{assemble_convection, assemble_rhs, SolidRhs};
pub use solid::{
    assemble_reference_stiffness, assemble_solid_force, assemble_solid_matrices, solid_operator,
    SolidMatrices,
};
pub use system::{
    block_preconditioner, compose_system, compose_velocity_block, fluid_operator,
    pressure_laplacian,
};
