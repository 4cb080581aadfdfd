//! Interpolation of the background P2 velocity at solid nodes.

use crate::assembly::dofmap::DofMap;
use crate::error::{Error, Result};
use crate::fem::shape::p2_shape_values;
use crate::la::sparse::{SparseMatrix, TripletBuilder};
use crate::mesh::locate::{locate, BinGrid};
use crate::mesh::trimesh::{Point, TriMesh};

#[derive(Debug, Clone)]
pub struct CouplingMatrix {
    /// Scalar interpolation: solid nodes by canonical P2 nodes.
    pub p: SparseMatrix,
    /// Vector interpolation onto solid unknowns (`c * n_solid + node`) from
    /// free velocity unknowns.
    pub d: SparseMatrix,
}

impl CouplingMatrix {
    pub fn n_solid(&self) -> usize {
        self.p.n_rows()
    }

    /// Velocities at the solid nodes.
    pub fn project_velocity(&self, u: &[f64]) -> Result<Vec<Point>> {
        let v = self.d.spmv(u)?;
        let n = self.n_solid();
        Ok((0..n).map(|i| [v[i], v[n + i]]).collect())
    }
}

/// Builds the interpolation matrices at the given solid node positions.
/// A node outside the background mesh is reported as escaping at time `t`.
pub fn build_coupling(
    mesh: &TriMesh,
    grid: &BinGrid,
    dofs: &DofMap,
    nodes: &[Point],
    t: f64,
) -> Result<CouplingMatrix> {
    let ns = nodes.len();
    let mut p = TripletBuilder::with_capacity(ns, dofs.n_canonical(), 6 * ns);
    let mut d = TripletBuilder::with_capacity(2 * ns, dofs.n_free_u(), 12 * ns);
    for (i, x) in nodes.iter().enumerate() {
        let loc = locate(mesh, grid, *x).map_err(|e| match e {
            Error::LocationFailure { .. } => Error::SolidEscape { node: i, t },
            other => other,
        })?;
        let phi = p2_shape_values(loc.barycentric);
        let elem = mesh.p2_nodes(loc.element);
        for a in 0..6 {
            let id = dofs.canonical(elem[a]);
            p.push(i, id, phi[a]);
            for c in 0..2 {
                if let Some(j) = dofs.canonical_dof(id, c) {
                    d.push(c * ns + i, j, phi[a]);
                }
            }
        }
    }
    Ok(CouplingMatrix {
        p: p.build()?,
        d: d.build()?,
    })
}
