use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::trimesh::{signed_area, Point};

pub type Mat2 = [[f64; 2]; 2];

/// Linear (P1) Lagrangian solid mesh with reference and current coordinates.
///
/// Connectivity, reference coordinates and the per-element reference data are
/// shared between snapshots; an update only replaces the current coordinates.
#[derive(Debug, Clone)]
pub struct SolidState {
    triangles: Arc<Vec<[usize; 3]>>,
    ref_coords: Arc<Vec<Point>>,
    /// Adjugate and determinant of the reference edge matrix
    /// `[X1 - X0, X2 - X0]` per element. Dividing after the product keeps
    /// `F = I` exact for an undeformed element.
    ref_adj: Arc<Vec<(Mat2, f64)>>,
    ref_areas: Arc<Vec<f64>>,
    cur_coords: Vec<Point>,
    initial_area: f64,
}

fn edge_matrix(a: Point, b: Point, c: Point) -> Mat2 {
    [[b[0] - a[0], c[0] - a[0]], [b[1] - a[1], c[1] - a[1]]]
}

fn adjugate(m: &Mat2) -> (Mat2, f64) {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    ([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]], det)
}

fn matmul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

impl SolidState {
    /// Builds a solid whose current configuration equals the reference one.
    pub fn new(coords: Vec<Point>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let mut ref_adj = Vec::with_capacity(triangles.len());
        let mut ref_areas = Vec::with_capacity(triangles.len());
        for (e, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= coords.len()) {
                return Err(Error::Argument(format!(
                    "solid element {e} references a missing node"
                )));
            }
            let (a, b, c) = (coords[tri[0]], coords[tri[1]], coords[tri[2]]);
            let area = signed_area(a, b, c);
            if !(area > 0.0) {
                return Err(Error::Geometry { element: e, area });
            }
            ref_adj.push(adjugate(&edge_matrix(a, b, c)));
            ref_areas.push(area);
        }
        let initial_area = ref_areas.iter().sum();
        Ok(Self {
            triangles: Arc::new(triangles),
            ref_coords: Arc::new(coords.clone()),
            ref_adj: Arc::new(ref_adj),
            ref_areas: Arc::new(ref_areas),
            cur_coords: coords,
            initial_area,
        })
    }

    /// Concentric-ring triangulation of a disc, or of its first quadrant.
    ///
    /// Ring `k` of `ceil(radius / target_h)` carries `6k` nodes for a full disc
    /// and `2k + 1` nodes (both axis ends included) for a quarter.
    pub fn build_disc(center: Point, radius: f64, target_h: f64, quarter: bool) -> Result<Self> {
        if !(radius > 0.0) || !(target_h > 0.0) {
            return Err(Error::Argument(format!(
                "disc needs positive radius and target_h, got {radius} and {target_h}"
            )));
        }
        let n_rings = (radius / target_h).ceil().max(1.0) as usize;
        let dr = radius / n_rings as f64;
        let mut coords = vec![center];
        let mut triangles = Vec::new();
        // (node, angle) along the previous ring
        let mut inner: Vec<(usize, f64)> = vec![(0, 0.0)];
        for k in 1..=n_rings {
            let r = k as f64 * dr;
            let mut outer = Vec::new();
            if quarter {
                let segs = 2 * k;
                for i in 0..=segs {
                    let th = 0.5 * PI * i as f64 / segs as f64;
                    outer.push((coords.len(), th));
                    coords.push(polar(center, r, th));
                }
            } else {
                let segs = 6 * k;
                for i in 0..segs {
                    let th = 2.0 * PI * i as f64 / segs as f64;
                    outer.push((coords.len(), th));
                    coords.push(polar(center, r, th));
                }
                // close the loop
                outer.push((outer[0].0, 2.0 * PI));
            }
            stitch(&inner, &outer, &coords, &mut triangles);
            inner = outer;
        }
        Self::new(coords, triangles)
    }

    pub fn n_nodes(&self) -> usize {
        self.cur_coords.len()
    }

    pub fn n_elements(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn ref_coords(&self) -> &[Point] {
        &self.ref_coords
    }

    pub fn cur_coords(&self) -> &[Point] {
        &self.cur_coords
    }

    pub fn ref_area(&self, e: usize) -> f64 {
        self.ref_areas[e]
    }

    pub fn ref_corners(&self, e: usize) -> [Point; 3] {
        let t = self.triangles[e];
        [
            self.ref_coords[t[0]],
            self.ref_coords[t[1]],
            self.ref_coords[t[2]],
        ]
    }

    pub fn cur_corners(&self, e: usize) -> [Point; 3] {
        let t = self.triangles[e];
        [
            self.cur_coords[t[0]],
            self.cur_coords[t[1]],
            self.cur_coords[t[2]],
        ]
    }

    pub fn current_area(&self, e: usize) -> f64 {
        let [a, b, c] = self.cur_corners(e);
        signed_area(a, b, c)
    }

    pub fn total_current_area(&self) -> f64 {
        (0..self.n_elements()).map(|e| self.current_area(e)).sum()
    }

    /// Total area at construction time.
    pub fn initial_area(&self) -> f64 {
        self.initial_area
    }

    /// Deformation gradient `F = dx/dX` of element `e` (constant per element).
    pub fn deformation_gradient(&self, e: usize) -> Mat2 {
        let [a, b, c] = self.cur_corners(e);
        let (adj, det) = &self.ref_adj[e];
        matmul(&edge_matrix(a, b, c), adj).map(|row| row.map(|v| v / det))
    }

    pub fn jacobian(&self, e: usize) -> f64 {
        let f = self.deformation_gradient(e);
        f[0][0] * f[1][1] - f[0][1] * f[1][0]
    }

    /// Same solid with new current coordinates; fails if any element inverts.
    pub fn with_coords(&self, cur_coords: Vec<Point>) -> Result<Self> {
        if cur_coords.len() != self.n_nodes() {
            return Err(Error::DimensionMismatch {
                context: "solid coordinates",
                expected: self.n_nodes(),
                actual: cur_coords.len(),
            });
        }
        let next = Self {
            cur_coords,
            ..self.clone_shared()
        };
        for e in 0..next.n_elements() {
            let area = next.current_area(e);
            if !(area > 0.0) {
                return Err(Error::Inversion { element: e, area });
            }
        }
        Ok(next)
    }

    fn clone_shared(&self) -> Self {
        Self {
            triangles: Arc::clone(&self.triangles),
            ref_coords: Arc::clone(&self.ref_coords),
            ref_adj: Arc::clone(&self.ref_adj),
            ref_areas: Arc::clone(&self.ref_areas),
            cur_coords: Vec::new(),
            initial_area: self.initial_area,
        }
    }

    /// Moves every node by `dt * velocity`.
    pub fn update(&self, velocity: &[Point], dt: f64) -> Result<Self> {
        if velocity.len() != self.n_nodes() {
            return Err(Error::DimensionMismatch {
                context: "solid velocity",
                expected: self.n_nodes(),
                actual: velocity.len(),
            });
        }
        let coords = self
            .cur_coords
            .iter()
            .zip(velocity)
            .map(|(x, v)| [x[0] + dt * v[0], x[1] + dt * v[1]])
            .collect();
        self.with_coords(coords)
    }

    /// Area-preserving stretch `(kx, ky)` of the current coordinates about `origin`.
    pub fn apply_stretch(&self, kx: f64, ky: f64, origin: Point) -> Result<Self> {
        if !((kx * ky - 1.0).abs() <= 1e-12) || !(kx > 0.0) {
            return Err(Error::Argument(format!(
                "stretch must preserve area (kx*ky = 1), got kx={kx}, ky={ky}"
            )));
        }
        let coords = self
            .cur_coords
            .iter()
            .map(|x| {
                [
                    origin[0] + kx * (x[0] - origin[0]),
                    origin[1] + ky * (x[1] - origin[1]),
                ]
            })
            .collect();
        self.with_coords(coords)
    }
}

fn polar(c: Point, r: f64, th: f64) -> Point {
    [c[0] + r * th.cos(), c[1] + r * th.sin()]
}

/// Triangulates the strip between two rings by merging their angle sequences.
fn stitch(
    inner: &[(usize, f64)],
    outer: &[(usize, f64)],
    coords: &[Point],
    out: &mut Vec<[usize; 3]>,
) {
    let (mut i, mut j) = (0, 0);
    while i + 1 < inner.len() || j + 1 < outer.len() {
        let advance_inner =
            j + 1 == outer.len() || (i + 1 < inner.len() && inner[i + 1].1 < outer[j + 1].1);
        let tri = if advance_inner {
            i += 1;
            [inner[i - 1].0, inner[i].0, outer[j].0]
        } else {
            j += 1;
            [inner[i].0, outer[j - 1].0, outer[j].0]
        };
        let [a, b, c] = tri;
        if signed_area(coords[a], coords[b], coords[c]) < 0.0 {
            out.push([a, c, b]);
        } else {
            out.push(tri);
        }
    }
}
