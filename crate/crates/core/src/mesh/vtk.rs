//! Legacy ASCII VTK snapshots.

use std::io::Write;

use crate::error::{Error, Result};
use crate::mesh::solid::SolidState;
use crate::mesh::trimesh::{Point, TriMesh};

fn header<W: Write>(w: &mut W, title: &str, points: &[Point], cells: &[[usize; 3]]) -> Result<()> {
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "{title}")?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(w, "POINTS {} double", points.len())?;
    for p in points {
        writeln!(w, "{:e} {:e} 0", p[0], p[1])?;
    }
    writeln!(w, "CELLS {} {}", cells.len(), 4 * cells.len())?;
    for c in cells {
        writeln!(w, "3 {} {} {}", c[0], c[1], c[2])?;
    }
    writeln!(w, "CELL_TYPES {}", cells.len())?;
    for _ in cells {
        writeln!(w, "5")?;
    }
    Ok(())
}

fn vectors<W: Write>(w: &mut W, name: &str, v: &[Point]) -> Result<()> {
    writeln!(w, "VECTORS {name} double")?;
    for p in v {
        writeln!(w, "{:e} {:e} 0", p[0], p[1])?;
    }
    Ok(())
}

fn scalars<W: Write>(w: &mut W, name: &str, v: &[f64]) -> Result<()> {
    writeln!(w, "SCALARS {name} double 1")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for x in v {
        writeln!(w, "{x:e}")?;
    }
    Ok(())
}

/// Writes the linear skeleton of the fluid mesh with vertex velocities and
/// one pressure value per element.
pub fn write_fluid<W: Write>(
    mut w: W,
    mesh: &TriMesh,
    velocity: &[Point],
    pressure: &[f64],
) -> Result<()> {
    if velocity.len() != mesh.n_vertices() {
        return Err(Error::DimensionMismatch {
            context: "fluid VTK velocity",
            expected: mesh.n_vertices(),
            actual: velocity.len(),
        });
    }
    if pressure.len() != mesh.n_triangles() {
        return Err(Error::DimensionMismatch {
            context: "fluid VTK pressure",
            expected: mesh.n_triangles(),
            actual: pressure.len(),
        });
    }
    let cells: Vec<[usize; 3]> = mesh
        .triangles()
        .iter()
        .map(|t| [t[0], t[1], t[2]])
        .collect();
    header(&mut w, "fluid", mesh.vertex_coords(), &cells)?;
    writeln!(w, "POINT_DATA {}", velocity.len())?;
    vectors(&mut w, "velocity", velocity)?;
    writeln!(w, "CELL_DATA {}", cells.len())?;
    scalars(&mut w, "pressure", pressure)?;
    Ok(())
}

/// Writes the current solid configuration with nodal velocities and per-element J.
pub fn write_solid<W: Write>(mut w: W, solid: &SolidState, velocity: &[Point]) -> Result<()> {
    if velocity.len() != solid.n_nodes() {
        return Err(Error::DimensionMismatch {
            context: "solid VTK velocity",
            expected: solid.n_nodes(),
            actual: velocity.len(),
        });
    }
    header(&mut w, "solid", solid.cur_coords(), solid.triangles())?;
    writeln!(w, "POINT_DATA {}", velocity.len())?;
    vectors(&mut w, "velocity", velocity)?;
    let jac: Vec<f64> = (0..solid.n_elements()).map(|e| solid.jacobian(e)).collect();
    writeln!(w, "CELL_DATA {}", jac.len())?;
    scalars(&mut w, "J", &jac)?;
    Ok(())
}
