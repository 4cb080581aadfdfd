use crate::assembly::dofmap::DofMap;
use crate::assembly::params::ModelParams;
use crate::error::Result;
use crate::fem::element::{p2_div, p2_mass, p2_visc};
use crate::fem::quadrature::degree5;
use crate::fem::shape::TriangleGeometry;
use crate::la::sparse::{SparseMatrix, TripletBuilder};
use crate::mesh::trimesh::TriMesh;

/// Matrices on the fixed background mesh, restricted to free unknowns.
#[derive(Debug, Clone)]
pub struct FluidMatrices {
    /// Unit-density vector mass matrix.
    pub m0: SparseMatrix,
    /// `(nu_f / 2) int Du : Dv`.
    pub k: SparseMatrix,
    /// `-int q div v`, velocity rows by pressure columns.
    pub b: SparseMatrix,
    /// Pressure Gram matrix.
    pub mp: SparseMatrix,
}

pub fn assemble_fluid(
    mesh: &TriMesh,
    dofs: &DofMap,
    params: &ModelParams,
) -> Result<FluidMatrices> {
    let rule = degree5();
    let n_u = dofs.n_free_u();
    let n_p = dofs.n_p();
    let n_t = mesh.n_triangles();
    let mut m = TripletBuilder::with_capacity(n_u, n_u, 72 * n_t);
    let mut k = TripletBuilder::with_capacity(n_u, n_u, 144 * n_t);
    let mut b = TripletBuilder::with_capacity(n_u, n_p, 48 * n_t);
    let mut mp = TripletBuilder::with_capacity(n_p, n_p, 16 * n_t);

    for t in 0..n_t {
        let geom = TriangleGeometry::new(&mesh.corners(t), t)?;
        let ud = dofs.element_velocity_dofs(mesh, t);
        let me = p2_mass(&geom, &rule);
        let ke = p2_visc(&geom, &rule);
        let be = p2_div(&geom, &rule);

        for c in 0..2 {
            for a in 0..6 {
                let Some(i) = ud[c * 6 + a] else { continue };
                for bb in 0..6 {
                    if let Some(j) = ud[c * 6 + bb] {
                        m.push(i, j, me[a][bb]);
                    }
                }
            }
        }
        for (r, row) in ke.iter().enumerate() {
            let Some(i) = ud[r] else { continue };
            for (s, v) in row.iter().enumerate() {
                if let Some(j) = ud[s] {
                    k.push(i, j, params.nu_f * v);
                }
            }
        }

        let p1 = dofs.element_p1_dofs(mesh, t);
        let p0 = dofs.element_p0_dof(t);
        for (r, row) in be.iter().enumerate() {
            let Some(i) = ud[r] else { continue };
            for q in 0..3 {
                b.push(i, p1[q], row[q]);
            }
            if let Some(j) = p0 {
                b.push(i, j, row[3]);
            }
        }

        // Gram matrix of {lambda_0, lambda_1, lambda_2, 1}
        let area = geom.area;
        for q in 0..3 {
            for r in 0..3 {
                let v = if q == r { area / 6.0 } else { area / 12.0 };
                mp.push(p1[q], p1[r], v);
            }
            if let Some(j) = p0 {
                mp.push(p1[q], j, area / 3.0);
                mp.push(j, p1[q], area / 3.0);
            }
        }
        if let Some(j) = p0 {
            mp.push(j, j, area);
        }
    }

    Ok(FluidMatrices {
        m0: m.build()?,
        k: k.build()?,
        b: b.build()?,
        mp: mp.build()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::dofmap::{BoundaryKind, ElementKind};

    fn periodic(n: usize, el: ElementKind) -> (TriMesh, DofMap, FluidMatrices) {
        let mesh = TriMesh::unit_square(n, true).unwrap();
        let dofs = DofMap::new(&mesh, BoundaryKind::Periodic, el).unwrap();
        let f = assemble_fluid(&mesh, &dofs, &ModelParams::param1()).unwrap();
        (mesh, dofs, f)
    }

    #[test]
    fn unit_x_velocity_has_unit_mass() {
        let (_, dofs, f) = periodic(1, ElementKind::P2P1);
        let u = dofs.interpolate(|_| [1.0, 0.0]);
        assert!((f.m0.quadratic_form(&u) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn rigid_translation_in_viscous_kernel() {
        let (_, dofs, f) = periodic(3, ElementKind::P2P1P0);
        for v in [[1.0, 0.0], [0.0, 1.0]] {
            let u = dofs.interpolate(|_| v);
            let r = f.k.spmv(&u).unwrap();
            assert!(r.iter().all(|x| x.abs() < 1e-13));
        }
    }

    #[test]
    fn constant_velocity_is_divergence_free() {
        let (_, dofs, f) = periodic(3, ElementKind::P2P1P0);
        let u = dofs.interpolate(|_| [0.3, -0.7]);
        let d = f.b.spmv_transpose(&u).unwrap();
        assert!(d.iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn deflation_vectors_in_kernel_of_b() {
        let (_, dofs, f) = periodic(4, ElementKind::P2P1P0);
        for v in dofs.deflation_basis() {
            let r = f.b.spmv(&v).unwrap();
            assert!(r.iter().all(|x| x.abs() < 1e-13));
        }
    }

    #[test]
    fn pressure_gram_integrates_constants() {
        let (_, dofs, f) = periodic(3, ElementKind::P2P1P0);
        let one_p1 = &dofs.deflation_basis()[0];
        assert!((f.mp.quadratic_form(one_p1) - 1.0).abs() < 1e-13);
    }
}
