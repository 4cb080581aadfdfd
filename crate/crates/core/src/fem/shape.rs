//! Lagrange shape functions on triangles. P2 local order: vertices 0, 1, 2,
//! then edges 01, 12, 20.

use crate::error::{Error, Result};
use crate::mesh::trimesh::{signed_area, Point};

pub type Vec2 = [f64; 2];

pub fn p2_shape_values(l: [f64; 3]) -> [f64; 6] {
    [
        l[0] * (2.0 * l[0] - 1.0),
        l[1] * (2.0 * l[1] - 1.0),
        l[2] * (2.0 * l[2] - 1.0),
        4.0 * l[0] * l[1],
        4.0 * l[1] * l[2],
        4.0 * l[2] * l[0],
    ]
}

/// Derivatives of the P2 basis with respect to each barycentric coordinate.
pub fn p2_bary_derivatives(l: [f64; 3]) -> [[f64; 3]; 6] {
    [
        [4.0 * l[0] - 1.0, 0.0, 0.0],
        [0.0, 4.0 * l[1] - 1.0, 0.0],
        [0.0, 0.0, 4.0 * l[2] - 1.0],
        [4.0 * l[1], 4.0 * l[0], 0.0],
        [0.0, 4.0 * l[2], 4.0 * l[1]],
        [4.0 * l[2], 0.0, 4.0 * l[0]],
    ]
}

/// Affine geometry of a triangle: area and constant barycentric gradients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleGeometry {
    pub area: f64,
    pub grad_lambda: [Vec2; 3],
}

impl TriangleGeometry {
    /// Fails with a geometry error on non-positive area. `element` only labels the error.
    pub fn new(corners: &[Point; 3], element: usize) -> Result<Self> {
        let [p0, p1, p2] = *corners;
        let area = signed_area(p0, p1, p2);
        if !(area > 0.0) {
            return Err(Error::Geometry { element, area });
        }
        let s = 1.0 / (2.0 * area);
        Ok(Self {
            area,
            grad_lambda: [
                [(p1[1] - p2[1]) * s, (p2[0] - p1[0]) * s],
                [(p2[1] - p0[1]) * s, (p0[0] - p2[0]) * s],
                [(p0[1] - p1[1]) * s, (p1[0] - p0[0]) * s],
            ],
        })
    }
}

pub fn p2_shape_gradients(l: [f64; 3], geom: &TriangleGeometry) -> [Vec2; 6] {
    let d = p2_bary_derivatives(l);
    let g = &geom.grad_lambda;
    let mut out = [[0.0; 2]; 6];
    for (a, da) in d.iter().enumerate() {
        for k in 0..3 {
            out[a][0] += da[k] * g[k][0];
            out[a][1] += da[k] * g[k][1];
        }
    }
    out
}
