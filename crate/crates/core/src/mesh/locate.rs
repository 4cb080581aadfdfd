use crate::error::{Error, Result};
use crate::mesh::trimesh::{signed_area2, Point, TriMesh};

/// Barycentric tolerance for accepting a point as inside an element.
pub const EPS_LOC: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointLocation {
    pub element: usize,
    pub barycentric: [f64; 3],
}

/// Uniform bins over the mesh bounding box; each bin lists (in ascending
/// order) the elements whose bounding box touches it.
#[derive(Debug, Clone)]
pub struct BinGrid {
    lower: Point,
    size: f64,
    nbx: usize,
    nby: usize,
    bins: Vec<Vec<usize>>,
}

impl BinGrid {
    pub fn new(mesh: &TriMesh) -> Self {
        Self::with_size(mesh, mesh.h())
    }

    pub fn with_size(mesh: &TriMesh, size: f64) -> Self {
        let (lower, upper) = (mesh.lower(), mesh.upper());
        let nbx = (((upper[0] - lower[0]) / size).ceil() as usize).max(1);
        let nby = (((upper[1] - lower[1]) / size).ceil() as usize).max(1);
        let mut grid = Self {
            lower,
            size,
            nbx,
            nby,
            bins: vec![Vec::new(); nbx * nby],
        };
        let pad = 1e-9 * size;
        for t in 0..mesh.n_triangles() {
            let c = mesh.corners(t);
            let xmin = c.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min) - pad;
            let xmax = c.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max) + pad;
            let ymin = c.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min) - pad;
            let ymax = c.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max) + pad;
            let (i0, j0) = grid.bin_of([xmin, ymin]);
            let (i1, j1) = grid.bin_of([xmax, ymax]);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    grid.bins[j * nbx + i].push(t);
                }
            }
        }
        grid
    }

    fn bin_of(&self, p: Point) -> (usize, usize) {
        let clamp = |v: f64, n: usize| -> usize {
            if v <= 0.0 {
                0
            } else {
                (v as usize).min(n - 1)
            }
        };
        (
            clamp((p[0] - self.lower[0]) / self.size, self.nbx),
            clamp((p[1] - self.lower[1]) / self.size, self.nby),
        )
    }
}

pub fn barycentric(corners: &[Point; 3], p: Point) -> [f64; 3] {
    let [a, b, c] = *corners;
    let area2 = signed_area2(a, b, c);
    let l1 = signed_area2(a, p, c) / area2;
    let l2 = signed_area2(a, b, p) / area2;
    [1.0 - l1 - l2, l1, l2]
}

/// Finds the element containing `p`; ties go to the lowest element index.
pub fn locate(mesh: &TriMesh, grid: &BinGrid, p: Point) -> Result<PointLocation> {
    let (i, j) = grid.bin_of(p);
    for &t in &grid.bins[j * grid.nbx + i] {
        let lam = barycentric(&mesh.corners(t), p);
        if lam.iter().all(|&l| l >= -EPS_LOC) {
            return Ok(PointLocation {
                element: t,
                barycentric: lam,
            });
        }
    }
    Err(Error::LocationFailure { x: p[0], y: p[1] })
}
