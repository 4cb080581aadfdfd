use crate::assembly::dofmap::DofMap;
use crate::assembly::fluid::FluidMatrices;
use crate::assembly::params::{ModelParams, Scheme};
use crate::assembly::solid::SolidMatrices;
use crate::error::{Error, Result};
use crate::fem::quadrature::degree5;
use crate::fem::shape::{p2_shape_gradients, p2_shape_values, TriangleGeometry};
use crate::la::sparse::SparseMatrix;
use crate::mesh::trimesh::TriMesh;

/// `int (w . grad) w . v` for every free test function (unit density).
pub fn assemble_convection(mesh: &TriMesh, dofs: &DofMap, w: &[f64]) -> Result<Vec<f64>> {
    if w.len() != dofs.n_free_u() {
        return Err(Error::DimensionMismatch {
            context: "convection velocity",
            expected: dofs.n_free_u(),
            actual: w.len(),
        });
    }
    let rule = degree5();
    let mut out = vec![0.0; w.len()];
    for t in 0..mesh.n_triangles() {
        let nodes = mesh.p2_nodes(t);
        let vals: Vec<[f64; 2]> = nodes.iter().map(|&n| dofs.node_velocity(w, n)).collect();
        if vals.iter().all(|v| v[0] == 0.0 && v[1] == 0.0) {
            continue;
        }
        let geom = TriangleGeometry::new(&mesh.corners(t), t)?;
        let ud = dofs.element_velocity_dofs(mesh, t);
        for (l, wq) in rule.points.iter().zip(rule.scaled_weights(geom.area)) {
            let phi = p2_shape_values(*l);
            let g = p2_shape_gradients(*l, &geom);
            let mut u = [0.0; 2];
            let mut grad = [[0.0; 2]; 2];
            for a in 0..6 {
                for c in 0..2 {
                    u[c] += phi[a] * vals[a][c];
                    for e in 0..2 {
                        grad[c][e] += vals[a][c] * g[a][e];
                    }
                }
            }
            for c in 0..2 {
                let conv = u[0] * grad[c][0] + u[1] * grad[c][1];
                for a in 0..6 {
                    if let Some(i) = ud[c * 6 + a] {
                        out[i] += wq * conv * phi[a];
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Solid contribution to one right-hand side.
pub struct SolidRhs<'a> {
    pub d: &'a SparseMatrix,
    pub mats: &'a SolidMatrices,
    /// Elastic force on solid nodes.
    pub force: &'a [f64],
}

/// `(c/dt) rho_f M0 u_n - rho_f conv(w) + D^T [(c/dt) rho_delta Ms0 D u_n + f_s]`,
/// where `conv(w)` is a precomputed convection vector.
pub fn assemble_rhs(
    fluid: &FluidMatrices,
    params: &ModelParams,
    dt: f64,
    scheme: Scheme,
    u_n: &[f64],
    convection: &[f64],
    solid: Option<SolidRhs<'_>>,
) -> Result<Vec<f64>> {
    let n = fluid.m0.n_rows();
    for (ctx, len) in [("rhs u_n", u_n.len()), ("rhs convection", convection.len())] {
        if len != n {
            return Err(Error::DimensionMismatch {
                context: ctx,
                expected: n,
                actual: len,
            });
        }
    }
    let alpha = scheme.c() / dt;
    let mut rhs = fluid.m0.spmv(u_n)?;
    for (r, cv) in rhs.iter_mut().zip(convection) {
        *r = alpha * params.rho_f * *r - params.rho_f * cv;
    }
    if let Some(s) = solid {
        let mut fs = s.force.to_vec();
        let beta = alpha * params.rho_delta();
        if beta != 0.0 {
            let dun = s.d.spmv(u_n)?;
            let m = s.mats.ms0.spmv(&dun)?;
            fs.iter_mut().zip(&m).for_each(|(f, mi)| *f += beta * mi);
        }
        let pulled = s.d.spmv_transpose(&fs)?;
        rhs.iter_mut().zip(&pulled).for_each(|(r, p)| *r += p);
    }
    Ok(rhs)
}
