//! Background (Eulerian) and solid (Lagrangian) triangle meshes.

pub mod locate;
pub mod solid;
pub mod trimesh;
pub mod vtk;

pub use locate::{locate, BinGrid, PointLocation, EPS_LOC};
pub use solid::{Mat2, SolidState};
pub use trimesh::{side, signed_area, Point, TriMesh};
