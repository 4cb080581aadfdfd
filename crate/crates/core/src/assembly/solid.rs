//! Solid-side matrices and the neo-Hookean force vector. Solid unknowns are
//! numbered component-major: `c * n_nodes + node`.

use crate::assembly::params::{ModelParams, Scheme};
use crate::error::{Error, Result};
use crate::fem::element::{p1_grad_grad, p1_mass, p1_visc};
use crate::fem::shape::TriangleGeometry;
use crate::la::sparse::{SparseMatrix, TripletBuilder};
use crate::mesh::solid::SolidState;

#[derive(Debug, Clone)]
pub struct SolidMatrices {
    /// Unit-density vector mass matrix on the current configuration.
    pub ms0: SparseMatrix,
    /// `1/2 int Du : Dv` on the current configuration.
    pub visc: SparseMatrix,
}

fn current_geometry(solid: &SolidState, e: usize) -> Result<TriangleGeometry> {
    TriangleGeometry::new(&solid.cur_corners(e), e).map_err(|err| match err {
        Error::Geometry { element, area } => Error::Inversion { element, area },
        other => other,
    })
}

fn scatter_vector(tb: &mut TripletBuilder, n: usize, tri: &[usize; 3], block: &[[f64; 6]; 6]) {
    for r in 0..6 {
        let i = (r / 3) * n + tri[r % 3];
        for s in 0..6 {
            let j = (s / 3) * n + tri[s % 3];
            tb.push(i, j, block[r][s]);
        }
    }
}

fn scatter_scalar(
    tb: &mut TripletBuilder,
    n: usize,
    tri: &[usize; 3],
    block: &[[f64; 3]; 3],
    scale: f64,
) {
    for c in 0..2 {
        for a in 0..3 {
            for b in 0..3 {
                tb.push(c * n + tri[a], c * n + tri[b], scale * block[a][b]);
            }
        }
    }
}

pub fn assemble_solid_matrices(solid: &SolidState) -> Result<SolidMatrices> {
    let n = solid.n_nodes();
    let ne = solid.n_elements();
    let mut ms = TripletBuilder::with_capacity(2 * n, 2 * n, 18 * ne);
    let mut vs = TripletBuilder::with_capacity(2 * n, 2 * n, 36 * ne);
    for (e, tri) in solid.triangles().iter().enumerate() {
        let g = current_geometry(solid, e)?;
        scatter_scalar(&mut ms, n, tri, &p1_mass(&g), 1.0);
        scatter_vector(&mut vs, n, tri, &p1_visc(&g));
    }
    Ok(SolidMatrices {
        ms0: ms.build()?,
        visc: vs.build()?,
    })
}

/// `int grad_X u : grad_X v` on the reference configuration.
pub fn assemble_reference_stiffness(solid: &SolidState) -> Result<SparseMatrix> {
    let n = solid.n_nodes();
    let mut tb = TripletBuilder::with_capacity(2 * n, 2 * n, 18 * solid.n_elements());
    for (e, tri) in solid.triangles().iter().enumerate() {
        let g = TriangleGeometry::new(&solid.ref_corners(e), e)?;
        scatter_scalar(&mut tb, n, tri, &p1_grad_grad(&g), 1.0);
    }
    tb.build()
}

/// Solid block `(c/dt) rho_delta Ms + nu_delta Vs + gamma Gref` acting on
/// solid nodal velocities.
pub fn solid_operator(
    mats: &SolidMatrices,
    reference: &SparseMatrix,
    params: &ModelParams,
    dt: f64,
    scheme: Scheme,
) -> Result<SparseMatrix> {
    let mass = scheme.c() / dt * params.rho_delta();
    let visc = mats.ms0.add_scaled(mass, &mats.visc, params.nu_delta())?;
    visc.add_scaled(1.0, reference, scheme.gamma(params.mu_s, dt))
}

/// Elastic force on solid nodes:
/// `-mu_s int F_n : grad_X v dX + mu_s int J^{-1} div v dx`,
/// with `F_n` taken from `previous` and the second term on `current`.
pub fn assemble_solid_force(
    previous: &SolidState,
    current: &SolidState,
    mu_s: f64,
) -> Result<Vec<f64>> {
    let n = previous.n_nodes();
    if current.n_nodes() != n {
        return Err(Error::DimensionMismatch {
            context: "solid force configurations",
            expected: n,
            actual: current.n_nodes(),
        });
    }
    let mut f = vec![0.0; 2 * n];
    if mu_s == 0.0 {
        return Ok(f);
    }
    for (e, tri) in previous.triangles().iter().enumerate() {
        let gref = TriangleGeometry::new(&previous.ref_corners(e), e)?;
        let gcur = current_geometry(current, e)?;
        let fn_ = previous.deformation_gradient(e);
        let j_inv = 1.0 / current.jacobian(e);
        for a in 0..3 {
            let ga = gref.grad_lambda[a];
            let gc = gcur.grad_lambda[a];
            for c in 0..2 {
                let fg = fn_[c][0] * ga[0] + fn_[c][1] * ga[1];
                f[c * n + tri[a]] += mu_s * (-gref.area * fg + j_inv * gcur.area * gc[c]);
            }
        }
    }
    Ok(f)
}
