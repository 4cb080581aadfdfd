use std::collections::HashMap;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Boundary side bit flags.
pub mod side {
    pub const LEFT: u8 = 1;
    pub const RIGHT: u8 = 2;
    pub const BOTTOM: u8 = 4;
    pub const TOP: u8 = 8;
}

/// Twice the signed area of `(a, b, c)`; positive for counter-clockwise order.
#[inline]
pub fn signed_area2(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])
}

#[inline]
pub fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * signed_area2(a, b, c)
}

/// Quadratic triangle mesh of an axis-aligned rectangle.
///
/// Triangles are stored as `[v0, v1, v2, m01, m12, m20]`: three vertex indices
/// followed by three midpoint indices (into the midpoint list). The global P2
/// node numbering puts vertices first, then midpoints.
#[derive(Debug, Clone)]
pub struct TriMesh {
    vertex_coords: Vec<Point>,
    midpoint_coords: Vec<Point>,
    triangles: Vec<[usize; 6]>,
    vertex_flags: Vec<u8>,
    midpoint_flags: Vec<u8>,
    h: f64,
    lower: Point,
    upper: Point,
    cells: (usize, usize),
    periodic: bool,
}

impl TriMesh {
    /// Structured mesh: every cell is split along its lower-left to upper-right
    /// diagonal. Periodic identification is left to the dof map.
    pub fn build_square(
        nx: usize,
        ny: usize,
        lower: Point,
        upper: Point,
        periodic: bool,
    ) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::Argument(format!(
                "mesh needs at least one cell per direction, got {nx}x{ny}"
            )));
        }
        if !(upper[0] > lower[0] && upper[1] > lower[1]) {
            return Err(Error::Argument(format!(
                "empty domain {lower:?}..{upper:?}"
            )));
        }
        let hx = (upper[0] - lower[0]) / nx as f64;
        let hy = (upper[1] - lower[1]) / ny as f64;

        let mut vertex_coords = Vec::with_capacity((nx + 1) * (ny + 1));
        let mut vertex_flags = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            for i in 0..=nx {
                // exact end coordinates avoid round-off on the far boundary
                let x = if i == nx {
                    upper[0]
                } else {
                    lower[0] + i as f64 * hx
                };
                let y = if j == ny {
                    upper[1]
                } else {
                    lower[1] + j as f64 * hy
                };
                vertex_coords.push([x, y]);
                let mut f = 0;
                if i == 0 {
                    f |= side::LEFT;
                }
                if i == nx {
                    f |= side::RIGHT;
                }
                if j == 0 {
                    f |= side::BOTTOM;
                }
                if j == ny {
                    f |= side::TOP;
                }
                vertex_flags.push(f);
            }
        }

        let vid = |i: usize, j: usize| j * (nx + 1) + i;
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint_coords = Vec::new();
        let mut midpoint_flags = Vec::new();
        let mut triangles = Vec::with_capacity(2 * nx * ny);
        let mut midpoint = |a: usize, b: usize, coords: &[Point], flags: &[u8]| -> usize {
            let key = (a.min(b), a.max(b));
            *edges.entry(key).or_insert_with(|| {
                let (pa, pb) = (coords[a], coords[b]);
                midpoint_coords.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
                midpoint_flags.push(flags[a] & flags[b]);
                midpoint_coords.len() - 1
            })
        };
        for j in 0..ny {
            for i in 0..nx {
                let (v00, v10, v11, v01) =
                    (vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1));
                for [a, b, c] in [[v00, v10, v11], [v00, v11, v01]] {
                    let m01 = midpoint(a, b, &vertex_coords, &vertex_flags);
                    let m12 = midpoint(b, c, &vertex_coords, &vertex_flags);
                    let m20 = midpoint(c, a, &vertex_coords, &vertex_flags);
                    triangles.push([a, b, c, m01, m12, m20]);
                }
            }
        }

        Ok(Self {
            vertex_coords,
            midpoint_coords,
            triangles,
            vertex_flags,
            midpoint_flags,
            h: hx,
            lower,
            upper,
            cells: (nx, ny),
            periodic,
        })
    }

    pub fn unit_square(n: usize, periodic: bool) -> Result<Self> {
        Self::build_square(n, n, [0.0, 0.0], [1.0, 1.0], periodic)
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_coords.len()
    }

    pub fn n_edges(&self) -> usize {
        self.midpoint_coords.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn n_p2_nodes(&self) -> usize {
        self.n_vertices() + self.n_edges()
    }

    pub fn vertex_coords(&self) -> &[Point] {
        &self.vertex_coords
    }

    pub fn midpoint_coords(&self) -> &[Point] {
        &self.midpoint_coords
    }

    pub fn triangles(&self) -> &[[usize; 6]] {
        &self.triangles
    }

    pub fn vertex_flags(&self) -> &[u8] {
        &self.vertex_flags
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn lower(&self) -> Point {
        self.lower
    }

    pub fn upper(&self) -> Point {
        self.upper
    }

    pub fn cells(&self) -> (usize, usize) {
        self.cells
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    /// Global P2 node indices of triangle `t` in local order.
    pub fn p2_nodes(&self, t: usize) -> [usize; 6] {
        let [a, b, c, m0, m1, m2] = self.triangles[t];
        let nv = self.n_vertices();
        [a, b, c, nv + m0, nv + m1, nv + m2]
    }

    pub fn node_coords(&self, node: usize) -> Point {
        let nv = self.n_vertices();
        if node < nv {
            self.vertex_coords[node]
        } else {
            self.midpoint_coords[node - nv]
        }
    }

    pub fn node_flags(&self, node: usize) -> u8 {
        let nv = self.n_vertices();
        if node < nv {
            self.vertex_flags[node]
        } else {
            self.midpoint_flags[node - nv]
        }
    }

    /// Corner coordinates of triangle `t`.
    pub fn corners(&self, t: usize) -> [Point; 3] {
        let tri = &self.triangles[t];
        [
            self.vertex_coords[tri[0]],
            self.vertex_coords[tri[1]],
            self.vertex_coords[tri[2]],
        ]
    }

    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        signed_area(a, b, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_cell_counts() {
        let m = TriMesh::unit_square(1, false).unwrap();
        assert_eq!(m.n_triangles(), 2);
        assert_eq!(m.n_vertices(), 4);
        assert_eq!(m.n_edges(), 5);
        assert_eq!(m.n_p2_nodes(), 9);
    }

    #[test]
    fn two_by_two_counts() {
        let m = TriMesh::unit_square(2, false).unwrap();
        assert_eq!(m.n_triangles(), 8);
        assert_eq!(m.n_vertices(), 9);
        assert_eq!(m.n_edges(), 16);
        assert_eq!(m.n_p2_nodes(), 25);
    }

    #[test]
    fn fifty_cells_give_h_002() {
        let m = TriMesh::unit_square(50, true).unwrap();
        assert!((m.h() - 0.02).abs() < 1e-15);
    }

    #[test]
    fn triangles_are_ccw_and_midpoints_average() {
        let m = TriMesh::build_square(3, 2, [-1.0, 0.5], [2.0, 1.5], false).unwrap();
        for t in 0..m.n_triangles() {
            assert!(m.area(t) > 0.0);
            let n = m.p2_nodes(t);
            for (k, (a, b)) in [(0, 1), (1, 2), (2, 0)].into_iter().enumerate() {
                let (pa, pb, pm) = (
                    m.node_coords(n[a]),
                    m.node_coords(n[b]),
                    m.node_coords(n[3 + k]),
                );
                assert!((pm[0] - 0.5 * (pa[0] + pb[0])).abs() < 1e-15);
                assert!((pm[1] - 0.5 * (pa[1] + pb[1])).abs() < 1e-15);
            }
        }
        let total: f64 = (0..m.n_triangles()).map(|t| m.area(t)).sum();
        assert!((total - 3.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_midpoints_inherit_shared_side() {
        let m = TriMesh::unit_square(1, false).unwrap();
        // the diagonal joins two opposite corners and is interior
        let diag = (0..m.n_p2_nodes())
            .find(|&n| m.node_coords(n) == [0.5, 0.5])
            .unwrap();
        assert_eq!(m.node_flags(diag), 0);
        let bottom = (0..m.n_p2_nodes())
            .find(|&n| m.node_coords(n) == [0.5, 0.0])
            .unwrap();
        assert_eq!(m.node_flags(bottom), side::BOTTOM);
    }

    #[test]
    fn rejects_zero_cells() {
        assert!(TriMesh::unit_square(0, false).is_err());
    }
}
