//! Scenario set-up, runs and convergence sweeps.

pub mod config;
pub mod run;
pub mod sweep;

use std::f64::consts::PI;

pub use config::{OutputConfig, ScenarioConfig, ScenarioKind, SolidConfig};
pub use run::{run_scenario, simulate, RunOutcome};
pub use sweep::{convergence_sweep, fit_order, SweepReport, SweepRow};

use crate::assembly::{BoundaryKind, DofMap};
use crate::error::Result;
use crate::la::minres::MinresOptions;
use crate::mesh::solid::SolidState;
use crate::mesh::trimesh::{Point, TriMesh};
use crate::stepper::{SimState, Simulation, SolverSettings};

/// Velocity `(dPsi/dy, -dPsi/dx)` of `Psi = psi0 sin(2 pi x) sin(2 pi y)`.
pub fn stream_velocity(psi0: f64, p: Point) -> Point {
    let k = 2.0 * PI;
    [
        k * psi0 * (k * p[0]).sin() * (k * p[1]).cos(),
        -k * psi0 * (k * p[0]).cos() * (k * p[1]).sin(),
    ]
}

pub struct Prepared {
    pub sim: Simulation,
    pub state: SimState,
}

pub fn settings(cfg: &ScenarioConfig) -> SolverSettings {
    SolverSettings {
        minres: MinresOptions {
            tol: cfg.solver_tol,
            max_iters: cfg.solver_max_iters,
            record_history: false,
        },
        fp_tol: cfg.fp_tol,
        fp_max: cfg.fp_max_iters,
        on_nonconvergence: cfg.on_nonconvergence,
        sampling: cfg.solid.sampling,
        relaxation: cfg.relaxation,
        convection: cfg.convection,
    }
}

/// Builds the solid of a scenario, pre-stretched if requested.
pub fn build_solid(cfg: &ScenarioConfig) -> Result<SolidState> {
    let s = &cfg.solid;
    let h = s.target_h.unwrap_or(1.0 / cfg.mesh_n as f64);
    let solid = SolidState::build_disc(s.center, s.radius, h, s.quarter)?;
    if s.stretch_kx == 1.0 {
        Ok(solid)
    } else {
        solid.apply_stretch(s.stretch_kx, 1.0 / s.stretch_kx, s.center)
    }
}

/// Meshes, matrices and the initial state of a scenario.
pub fn initial_condition(cfg: &ScenarioConfig) -> Result<Prepared> {
    cfg.validate()?;
    let periodic = cfg.bc == BoundaryKind::Periodic;
    let mesh = TriMesh::unit_square(cfg.mesh_n, periodic)?;
    let dofs = DofMap::new(&mesh, cfg.bc, cfg.element)?;
    let psi0 = cfg.stream_amplitude;
    let u0 = dofs.interpolate(|p| stream_velocity(psi0, p));
    let solid = if cfg.has_solid() {
        Some(build_solid(cfg)?)
    } else {
        None
    };
    let mut sim = Simulation::new(mesh, dofs, cfg.params, cfg.dt, cfg.scheme, settings(cfg))?;
    let state = sim.initial_state(u0, solid)?;
    Ok(Prepared { sim, state })
}
