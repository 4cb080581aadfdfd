//! Local element matrices.
//!
//! Vector-valued blocks are ordered component-major: local index `c * n + a`
//! for component `c` of basis function `a`, with `n = 6` (P2) or `3` (P1).
//! The viscous blocks hold `1/2 * int Du : Dv` with `Du = grad u + grad u^T`.

use crate::error::Result;
use crate::fem::quadrature::{degree5, QuadratureRule};
use crate::fem::shape::{p2_shape_gradients, p2_shape_values, TriangleGeometry};
use crate::mesh::trimesh::Point;

pub type Mat<const R: usize, const C: usize> = [[f64; C]; R];

/// Scalar P2 mass matrix.
pub fn p2_mass(geom: &TriangleGeometry, rule: &QuadratureRule) -> Mat<6, 6> {
    let mut m = [[0.0; 6]; 6];
    for (l, w) in rule.points.iter().zip(rule.scaled_weights(geom.area)) {
        let phi = p2_shape_values(*l);
        for a in 0..6 {
            for b in 0..6 {
                m[a][b] += w * phi[a] * phi[b];
            }
        }
    }
    m
}

/// Vector P2 symmetric-gradient block `1/2 int Du : Dv`.
pub fn p2_visc(geom: &TriangleGeometry, rule: &QuadratureRule) -> Mat<12, 12> {
    let mut k = [[0.0; 12]; 12];
    for (l, w) in rule.points.iter().zip(rule.scaled_weights(geom.area)) {
        let g = p2_shape_gradients(*l, geom);
        for a in 0..6 {
            for b in 0..6 {
                let gg = g[a][0] * g[b][0] + g[a][1] * g[b][1];
                for c in 0..2 {
                    for e in 0..2 {
                        let mut v = g[a][e] * g[b][c];
                        if c == e {
                            v += gg;
                        }
                        k[c * 6 + a][e * 6 + b] += w * v;
                    }
                }
            }
        }
    }
    k
}

/// Pressure coupling `-int q div v`: columns 0..3 are the P1 pressure
/// functions, column 3 the element constant.
pub fn p2_div(geom: &TriangleGeometry, rule: &QuadratureRule) -> Mat<12, 4> {
    let mut b = [[0.0; 4]; 12];
    for (l, w) in rule.points.iter().zip(rule.scaled_weights(geom.area)) {
        let g = p2_shape_gradients(*l, geom);
        let psi = [l[0], l[1], l[2], 1.0];
        for a in 0..6 {
            for c in 0..2 {
                for (q, p) in psi.iter().enumerate() {
                    b[c * 6 + a][q] -= w * p * g[a][c];
                }
            }
        }
    }
    b
}

/// Scalar P1 mass matrix `(T/12) [[2,1,1],[1,2,1],[1,1,2]]`.
pub fn p1_mass(geom: &TriangleGeometry) -> Mat<3, 3> {
    let d = geom.area / 6.0;
    let o = geom.area / 12.0;
    [[d, o, o], [o, d, o], [o, o, d]]
}

/// Scalar P1 stiffness `int grad phi_a . grad phi_b`.
pub fn p1_grad_grad(geom: &TriangleGeometry) -> Mat<3, 3> {
    let g = &geom.grad_lambda;
    let mut k = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            k[a][b] = geom.area * (g[a][0] * g[b][0] + g[a][1] * g[b][1]);
        }
    }
    k
}

/// Vector P1 symmetric-gradient block `1/2 int Du : Dv`.
pub fn p1_visc(geom: &TriangleGeometry) -> Mat<6, 6> {
    let g = &geom.grad_lambda;
    let mut k = [[0.0; 6]; 6];
    for a in 0..3 {
        for b in 0..3 {
            let gg = g[a][0] * g[b][0] + g[a][1] * g[b][1];
            for c in 0..2 {
                for e in 0..2 {
                    let mut v = g[a][e] * g[b][c];
                    if c == e {
                        v += gg;
                    }
                    k[c * 3 + a][e * 3 + b] = geom.area * v;
                }
            }
        }
    }
    k
}

/// Expands a scalar block to the block-diagonal vector form.
pub fn vectorize<const N: usize, const M: usize>(s: &Mat<N, N>) -> Mat<M, M> {
    debug_assert_eq!(M, 2 * N);
    let mut out = [[0.0; M]; M];
    for c in 0..2 {
        for a in 0..N {
            for b in 0..N {
                out[c * N + a][c * N + b] = s[a][b];
            }
        }
    }
    out
}

/// Every local block on one triangle, as used in tests and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementMatrices {
    pub mass: Mat<12, 12>,
    pub visc: Mat<12, 12>,
    pub div_p1: Mat<12, 3>,
    pub div_p0: Mat<12, 1>,
    pub solid_mass: Mat<6, 6>,
    pub solid_visc: Mat<6, 6>,
    pub ref_grad: Mat<6, 6>,
}

/// All local blocks of a triangle; `ref_geom` (defaulting to `geom`) is
/// used for the reference-configuration gradient block only.
pub fn element_matrices(
    geom: &[Point; 3],
    ref_geom: Option<&[Point; 3]>,
) -> Result<ElementMatrices> {
    let rule = degree5();
    let cur = TriangleGeometry::new(geom, 0)?;
    let reference = match ref_geom {
        Some(r) => TriangleGeometry::new(r, 0)?,
        None => cur,
    };
    let div = p2_div(&cur, &rule);
    let mut div_p1 = [[0.0; 3]; 12];
    let mut div_p0 = [[0.0; 1]; 12];
    for i in 0..12 {
        div_p1[i].copy_from_slice(&div[i][..3]);
        div_p0[i][0] = div[i][3];
    }
    Ok(ElementMatrices {
        mass: vectorize::<6, 12>(&p2_mass(&cur, &rule)),
        visc: p2_visc(&cur, &rule),
        div_p1,
        div_p0,
        solid_mass: vectorize::<3, 6>(&p1_mass(&cur)),
        solid_visc: p1_visc(&cur),
        ref_grad: vectorize::<3, 6>(&p1_grad_grad(&reference)),
    })
}
