use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mesh::trimesh::{side, Point, TriMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    Periodic,
    Noslip,
    Freeslip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    /// Taylor-Hood.
    P2P1,
    /// Taylor-Hood with an elementwise constant pressure enrichment.
    P2P1P0,
}

impl FromStr for BoundaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "periodic" => Ok(Self::Periodic),
            "noslip" => Ok(Self::Noslip),
            "freeslip" => Ok(Self::Freeslip),
            _ => Err(Error::Argument(format!("unknown boundary condition '{s}'"))),
        }
    }
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Periodic => "periodic",
            Self::Noslip => "noslip",
            Self::Freeslip => "freeslip",
        })
    }
}

impl FromStr for ElementKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p2p1" => Ok(Self::P2P1),
            "p2p1p0" => Ok(Self::P2P1P0),
            _ => Err(Error::Argument(format!("unknown element '{s}'"))),
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::P2P1 => "p2p1",
            Self::P2P1P0 => "p2p1p0",
        })
    }
}

/// Maps mesh nodes to unknowns.
///
/// Periodic partners share one canonical node. Free velocity unknowns are
/// numbered all x components first, then all y components.
#[derive(Debug, Clone)]
pub struct DofMap {
    bc: BoundaryKind,
    element: ElementKind,
    node_canon: Vec<usize>,
    canon_coords: Vec<Point>,
    velocity: Vec<[Option<usize>; 2]>,
    n_free: [usize; 2],
    n_p1: usize,
    n_triangles: usize,
}

impl DofMap {
    pub fn new(mesh: &TriMesh, bc: BoundaryKind, element: ElementKind) -> Result<Self> {
        let periodic = bc == BoundaryKind::Periodic;
        if periodic != mesh.is_periodic() {
            return Err(Error::Argument(format!(
                "boundary condition {bc} does not match a mesh built with periodic = {}",
                mesh.is_periodic()
            )));
        }
        let (lower, upper) = (mesh.lower(), mesh.upper());
        let quantum = mesh.h() / 1000.0;
        let key = |p: Point| -> (i64, i64) {
            let mut q = p;
            if periodic {
                for d in 0..2 {
                    if (q[d] - upper[d]).abs() < quantum {
                        q[d] = lower[d];
                    }
                }
            }
            (
                ((q[0] - lower[0]) / quantum).round() as i64,
                ((q[1] - lower[1]) / quantum).round() as i64,
            )
        };

        let n_nodes = mesh.n_p2_nodes();
        let mut lookup: HashMap<(i64, i64), usize> = HashMap::with_capacity(n_nodes);
        let mut node_canon = Vec::with_capacity(n_nodes);
        let mut canon_coords = Vec::new();
        let mut canon_flags: Vec<u8> = Vec::new();
        for node in 0..n_nodes {
            let p = mesh.node_coords(node);
            let id = *lookup.entry(key(p)).or_insert_with(|| {
                canon_coords.push(p);
                canon_flags.push(0);
                canon_coords.len() - 1
            });
            canon_flags[id] |= mesh.node_flags(node);
            node_canon.push(id);
        }
        // vertices come first, so canonical vertices are 0..n_p1
        let n_p1 = node_canon[..mesh.n_vertices()]
            .iter()
            .max()
            .map_or(0, |m| m + 1);

        let constrained = |flags: u8, comp: usize| -> bool {
            match bc {
                BoundaryKind::Periodic => false,
                BoundaryKind::Noslip => flags != 0,
                BoundaryKind::Freeslip => {
                    let mask = if comp == 0 {
                        side::LEFT | side::RIGHT
                    } else {
                        side::BOTTOM | side::TOP
                    };
                    flags & mask != 0
                }
            }
        };
        let mut velocity = vec![[None, None]; canon_coords.len()];
        let mut next = 0;
        let mut n_free = [0; 2];
        for comp in 0..2 {
            for (id, flags) in canon_flags.iter().enumerate() {
                if !constrained(*flags, comp) {
                    velocity[id][comp] = Some(next);
                    next += 1;
                    n_free[comp] += 1;
                }
            }
        }

        Ok(Self {
            bc,
            element,
            node_canon,
            canon_coords,
            velocity,
            n_free,
            n_p1,
            n_triangles: mesh.n_triangles(),
        })
    }

    pub fn boundary(&self) -> BoundaryKind {
        self.bc
    }

    pub fn element(&self) -> ElementKind {
        self.element
    }

    pub fn n_canonical(&self) -> usize {
        self.canon_coords.len()
    }

    pub fn canonical(&self, node: usize) -> usize {
        self.node_canon[node]
    }

    pub fn canonical_coords(&self, id: usize) -> Point {
        self.canon_coords[id]
    }

    pub fn n_free_u(&self) -> usize {
        self.n_free[0] + self.n_free[1]
    }

    pub fn n_p1(&self) -> usize {
        self.n_p1
    }

    pub fn n_p(&self) -> usize {
        match self.element {
            ElementKind::P2P1 => self.n_p1,
            ElementKind::P2P1P0 => self.n_p1 + self.n_triangles,
        }
    }

    pub fn is_enriched(&self) -> bool {
        self.element == ElementKind::P2P1P0
    }

    /// Free unknown of component `comp` at canonical node `id`, if any.
    pub fn canonical_dof(&self, id: usize, comp: usize) -> Option<usize> {
        self.velocity[id][comp]
    }

    pub fn velocity_dof(&self, node: usize, comp: usize) -> Option<usize> {
        self.velocity[self.node_canon[node]][comp]
    }

    /// Local velocity unknowns of a triangle, component-major (`c * 6 + a`).
    pub fn element_velocity_dofs(&self, mesh: &TriMesh, t: usize) -> [Option<usize>; 12] {
        let nodes = mesh.p2_nodes(t);
        let mut out = [None; 12];
        for c in 0..2 {
            for a in 0..6 {
                out[c * 6 + a] = self.velocity_dof(nodes[a], c);
            }
        }
        out
    }

    pub fn element_p1_dofs(&self, mesh: &TriMesh, t: usize) -> [usize; 3] {
        let tri = mesh.triangles()[t];
        [
            self.node_canon[tri[0]],
            self.node_canon[tri[1]],
            self.node_canon[tri[2]],
        ]
    }

    pub fn element_p0_dof(&self, t: usize) -> Option<usize> {
        self.is_enriched().then(|| self.n_p1 + t)
    }

    /// Pressure null-space vectors: one constant per pressure family.
    pub fn deflation_basis(&self) -> Vec<Vec<f64>> {
        let n_p = self.n_p();
        let mut p1 = vec![0.0; n_p];
        p1[..self.n_p1].fill(1.0);
        let mut basis = vec![p1];
        if self.is_enriched() {
            let mut p0 = vec![0.0; n_p];
            p0[self.n_p1..].fill(1.0);
            basis.push(p0);
        }
        basis
    }

    /// Nodal interpolant of `f` on the free unknowns.
    pub fn interpolate(&self, f: impl Fn(Point) -> Point) -> Vec<f64> {
        let mut u = vec![0.0; self.n_free_u()];
        for (id, p) in self.canon_coords.iter().enumerate() {
            let v = f(*p);
            for c in 0..2 {
                if let Some(d) = self.velocity[id][c] {
                    u[d] = v[c];
                }
            }
        }
        u
    }

    /// Velocity at canonical node `id` (constrained components are zero).
    pub fn canonical_velocity(&self, u: &[f64], id: usize) -> Point {
        let get = |c: usize| self.velocity[id][c].map_or(0.0, |d| u[d]);
        [get(0), get(1)]
    }

    pub fn node_velocity(&self, u: &[f64], node: usize) -> Point {
        self.canonical_velocity(u, self.node_canon[node])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_two_by_two_identifies_to_sixteen() {
        let m = TriMesh::unit_square(2, true).unwrap();
        let d = DofMap::new(&m, BoundaryKind::Periodic, ElementKind::P2P1P0).unwrap();
        assert_eq!(d.n_canonical(), 16);
        assert_eq!(d.n_free_u(), 32);
        assert_eq!(d.n_p1(), 4);
        assert_eq!(d.n_p(), 4 + 8);
    }

    #[test]
    fn periodic_partners_share_dofs() {
        let m = TriMesh::unit_square(3, true).unwrap();
        let d = DofMap::new(&m, BoundaryKind::Periodic, ElementKind::P2P1).unwrap();
        let find = |p: Point| {
            (0..m.n_p2_nodes()).find(|&n| {
                let q = m.node_coords(n);
                (q[0] - p[0]).abs() < 1e-12 && (q[1] - p[1]).abs() < 1e-12
            })
        };
        let a = find([0.0, 0.5]).unwrap();
        let b = find([1.0, 0.5]).unwrap();
        assert_eq!(d.velocity_dof(a, 0), d.velocity_dof(b, 0));
        let c0 = find([0.0, 0.0]).unwrap();
        let c1 = find([1.0, 1.0]).unwrap();
        assert_eq!(d.canonical(c0), d.canonical(c1));
    }

    #[test]
    fn noslip_boundary_has_no_free_dofs() {
        let m = TriMesh::unit_square(3, false).unwrap();
        let d = DofMap::new(&m, BoundaryKind::Noslip, ElementKind::P2P1).unwrap();
        for n in 0..m.n_p2_nodes() {
            let boundary = m.node_flags(n) != 0;
            assert_eq!(d.velocity_dof(n, 0).is_none(), boundary);
            assert_eq!(d.velocity_dof(n, 1).is_none(), boundary);
        }
        // interior P2 nodes of a 3x3 mesh: 5x5
        assert_eq!(d.n_free_u(), 2 * 25);
    }

    #[test]
    fn freeslip_constrains_normal_component() {
        let m = TriMesh::unit_square(2, false).unwrap();
        let d = DofMap::new(&m, BoundaryKind::Freeslip, ElementKind::P2P1).unwrap();
        let bottom = (0..m.n_p2_nodes())
            .find(|&n| m.node_coords(n) == [0.25, 0.0])
            .unwrap();
        assert!(d.velocity_dof(bottom, 0).is_some());
        assert!(d.velocity_dof(bottom, 1).is_none());
        let left = (0..m.n_p2_nodes())
            .find(|&n| m.node_coords(n) == [0.0, 0.25])
            .unwrap();
        assert!(d.velocity_dof(left, 0).is_none());
        assert!(d.velocity_dof(left, 1).is_some());
    }

    #[test]
    fn mismatched_periodicity_rejected() {
        let m = TriMesh::unit_square(2, false).unwrap();
        assert!(DofMap::new(&m, BoundaryKind::Periodic, ElementKind::P2P1).is_err());
    }

    #[test]
    fn deflation_vectors() {
        let m = TriMesh::unit_square(2, true).unwrap();
        let d = DofMap::new(&m, BoundaryKind::Periodic, ElementKind::P2P1P0).unwrap();
        let b = d.deflation_basis();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].iter().sum::<f64>(), 4.0);
        assert_eq!(b[1].iter().sum::<f64>(), 8.0);
    }
}
