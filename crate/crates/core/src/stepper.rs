//! Time stepping: Crank-Nicolson or backward Euler with a fixed-point loop
//! over convection, the `J^{-1}` term and the solid configuration.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::assembly::{
    assemble_convection, assemble_fluid, assemble_reference_stiffness, assemble_rhs,
    assemble_solid_force, assemble_solid_matrices, block_preconditioner, compose_system,
    compose_velocity_block, fluid_operator, solid_operator, DofMap, FluidMatrices, ModelParams,
    Scheme, SolidMatrices, SolidRhs,
};
use crate::coupling::{build_coupling, CouplingMatrix};
use crate::error::{Error, Result};
use crate::la::minres::{minres, BlockPreconditioner, MinresOptions, SolveStats};
use crate::la::sparse::{dot, norm_inf, SparseMatrix};
use crate::mesh::locate::BinGrid;
use crate::mesh::solid::SolidState;
use crate::mesh::trimesh::{Point, TriMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonConvergence {
    Abort,
    Accept,
}

impl FromStr for NonConvergence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "abort" => Ok(Self::Abort),
            "accept" => Ok(Self::Accept),
            _ => Err(Error::Argument(format!(
                "unknown non-convergence policy '{s}'"
            ))),
        }
    }
}

impl fmt::Display for NonConvergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Abort => "abort",
            Self::Accept => "accept",
        })
    }
}

/// Where the velocity that moves the solid is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolidSampling {
    /// At the node positions at the start of the step.
    Start,
    /// At the tentative positions of the previous fixed-point iterate.
    Tentative,
}

/// Relaxation of the fixed-point update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relaxation {
    /// Plain Picard: the next iterate is the last solve.
    None,
    /// Aitken's dynamic relaxation, starting from a factor of one half.
    Aitken,
}

impl FromStr for Relaxation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "aitken" => Ok(Self::Aitken),
            _ => Err(Error::Argument(format!("unknown relaxation '{s}'"))),
        }
    }
}

impl fmt::Display for Relaxation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::None => "none",
            Self::Aitken => "aitken",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverSettings {
    pub minres: MinresOptions,
    pub fp_tol: f64,
    pub fp_max: usize,
    pub on_nonconvergence: NonConvergence,
    pub sampling: SolidSampling,
    pub relaxation: Relaxation,
    /// Drop the convection term (used for dissipativity checks).
    pub convection: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            minres: MinresOptions::default(),
            fp_tol: 1e-6,
            fp_max: 50,
            on_nonconvergence: NonConvergence::Abort,
            sampling: SolidSampling::Start,
            relaxation: Relaxation::None,
            convection: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimState {
    pub t: f64,
    pub step_index: usize,
    pub u: Vec<f64>,
    pub p: Vec<f64>,
    pub solid: Option<SolidState>,
    /// Interpolation at this state's solid configuration.
    coupling: Option<Arc<CouplingMatrix>>,
}

impl SimState {
    pub fn coupling(&self) -> Option<&CouplingMatrix> {
        self.coupling.as_deref()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointReport {
    pub iterations: usize,
    pub final_increment: f64,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub state: SimState,
    pub report: FixedPointReport,
    /// Stats of the last linear solve, with `iterations` summed over the step.
    pub stats: SolveStats,
    /// Viscous dissipation of the step in the fluid and the solid correction.
    pub dissipation: [f64; 2],
}

/// Everything that stays fixed during a run.
pub struct Simulation {
    pub mesh: TriMesh,
    pub grid: BinGrid,
    pub dofs: DofMap,
    pub fluid: FluidMatrices,
    pub params: ModelParams,
    pub dt: f64,
    pub scheme: Scheme,
    pub settings: SolverSettings,
    af: SparseMatrix,
    precond: BlockPreconditioner,
    reference_stiffness: Option<SparseMatrix>,
}

fn relative_increment(new: &[f64], old: &[f64]) -> f64 {
    let diff = new
        .iter()
        .zip(old)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if diff == 0.0 {
        return 0.0;
    }
    diff / norm_inf(new).max(f64::MIN_POSITIVE)
}

fn to_points(v: &[f64]) -> Vec<Point> {
    let n = v.len() / 2;
    (0..n).map(|i| [v[i], v[n + i]]).collect()
}

impl Simulation {
    pub fn new(
        mesh: TriMesh,
        dofs: DofMap,
        params: ModelParams,
        dt: f64,
        scheme: Scheme,
        settings: SolverSettings,
    ) -> Result<Self> {
        params.validate()?;
        if !(dt > 0.0) {
            return Err(Error::Argument(format!(
                "time step must be positive, got {dt}"
            )));
        }
        let grid = BinGrid::new(&mesh);
        let fluid = assemble_fluid(&mesh, &dofs, &params)?;
        let af = fluid_operator(&fluid, &params, dt, scheme)?;
        let precond = block_preconditioner(&af, &fluid, &params, dt, scheme)?;
        Ok(Self {
            mesh,
            grid,
            dofs,
            fluid,
            params,
            dt,
            scheme,
            settings,
            af,
            precond,
            reference_stiffness: None,
        })
    }

    /// Initial state; the solid (if any) fixes the reference configuration.
    pub fn initial_state(&mut self, u: Vec<f64>, solid: Option<SolidState>) -> Result<SimState> {
        if u.len() != self.dofs.n_free_u() {
            return Err(Error::DimensionMismatch {
                context: "initial velocity",
                expected: self.dofs.n_free_u(),
                actual: u.len(),
            });
        }
        let coupling = match &solid {
            Some(s) => {
                self.reference_stiffness = Some(assemble_reference_stiffness(s)?);
                Some(Arc::new(self.couple(s.cur_coords(), 0.0)?))
            }
            None => None,
        };
        Ok(SimState {
            t: 0.0,
            step_index: 0,
            u,
            p: vec![0.0; self.dofs.n_p()],
            solid,
            coupling,
        })
    }

    fn couple(&self, nodes: &[Point], t: f64) -> Result<CouplingMatrix> {
        build_coupling(&self.mesh, &self.grid, &self.dofs, nodes, t)
    }

    pub fn precond(&self) -> &BlockPreconditioner {
        &self.precond
    }

    /// Velocity block without the solid correction.
    pub fn fluid_block(&self) -> &SparseMatrix {
        &self.af
    }

    pub fn step(&self, state: &SimState) -> Result<StepOutcome> {
        let dt = self.dt;
        let t_next = state.t + dt;
        let u_n = &state.u;
        let mut w = u_n.clone();
        let mut p = state.p.clone();
        let mut report = FixedPointReport {
            iterations: 0,
            final_increment: f64::INFINITY,
            converged: false,
        };
        let mut total_iters = 0;
        let mut stats = SolveStats {
            iterations: 0,
            final_relative_residual: 0.0,
            converged: true,
        };
        // solid data of the last solve: configuration, interpolation, matrices
        let mut last: Option<(SolidState, CouplingMatrix, SolidMatrices)> = None;
        // Aitken state: previous fixed-point residual and factor
        let mut prev_residual: Option<Vec<f64>> = None;
        let mut omega = 0.5;

        for k in 1..=self.settings.fp_max {
            let mut a = None;
            let mut solid_parts = None;
            if let (Some(solid_n), Some(d_n)) = (&state.solid, &state.coupling) {
                let d_sample = match (self.settings.sampling, &last) {
                    (SolidSampling::Tentative, Some((_, c, _))) => &c.d,
                    _ => &d_n.d,
                };
                let vel = to_points(&d_sample.spmv(&w)?);
                let solid_k = solid_n.update(&vel, dt)?;
                let coupling_k = self.couple(solid_k.cur_coords(), t_next)?;
                let mats_k = assemble_solid_matrices(&solid_k)?;
                let gref = self.reference_stiffness.as_ref().ok_or_else(|| {
                    Error::Argument("solid state was not registered through initial_state".into())
                })?;
                let s_op = solid_operator(&mats_k, gref, &self.params, dt, self.scheme)?;
                let force = assemble_solid_force(solid_n, &solid_k, self.params.mu_s)?;
                a = Some(compose_velocity_block(&self.af, &coupling_k.d, &s_op)?);
                solid_parts = Some(force);
                last = Some((solid_k, coupling_k, mats_k));
            }

            let conv = if self.settings.convection {
                assemble_convection(&self.mesh, &self.dofs, &w)?
            } else {
                vec![0.0; w.len()]
            };
            let solid_rhs = match (&last, &solid_parts) {
                (Some((_, c, m)), Some(force)) => Some(SolidRhs {
                    d: &c.d,
                    mats: m,
                    force,
                }),
                _ => None,
            };
            let rhs = assemble_rhs(
                &self.fluid,
                &self.params,
                dt,
                self.scheme,
                u_n,
                &conv,
                solid_rhs,
            )?;
            let a = a.unwrap_or_else(|| self.af.clone());
            let sys = compose_system(a, &self.fluid, &self.dofs, rhs)?;
            let sol = minres(&sys, &self.precond, self.settings.minres, Some((&w, &p)))?;
            total_iters += sol.stats.iterations;
            stats = sol.stats;
            if !sol.stats.converged {
                return Err(Error::SolverNotConverged {
                    iterations: sol.stats.iterations,
                    residual: sol.stats.final_relative_residual,
                });
            }

            let inc = relative_increment(&sol.u, &w);
            p = sol.p;
            report.iterations = k;
            report.final_increment = inc;
            // the accepted iterate is always an unrelaxed solve, so the
            // discrete energy identity holds for it
            if inc <= self.settings.fp_tol || k == self.settings.fp_max {
                w = sol.u;
                report.converged = inc <= self.settings.fp_tol;
                break;
            }
            match self.settings.relaxation {
                Relaxation::None => w = sol.u,
                Relaxation::Aitken => {
                    let r: Vec<f64> = sol.u.iter().zip(&w).map(|(a, b)| a - b).collect();
                    if let Some(prev) = &prev_residual {
                        let dr: Vec<f64> = r.iter().zip(prev).map(|(a, b)| a - b).collect();
                        let den = dot(&dr, &dr);
                        if den > 0.0 {
                            omega = (-omega * dot(prev, &dr) / den).clamp(0.05, 2.0);
                        }
                    }
                    w.iter_mut().zip(&r).for_each(|(x, d)| *x += omega * d);
                    prev_residual = Some(r);
                }
            }
        }
        stats.iterations = total_iters;
        if !report.converged && self.settings.on_nonconvergence == NonConvergence::Abort {
            return Err(Error::FixedPointNotConverged {
                iterations: report.iterations,
                increment: report.final_increment,
            });
        }

        let ed_omega = dt * self.fluid.k.quadratic_form(&w);
        let mut ed_solid = 0.0;
        let (solid, coupling) = match (&state.solid, &state.coupling, &last) {
            (Some(solid_n), Some(d_n), Some((_, d_k, mats_k))) => {
                let nu_delta = self.params.nu_delta();
                if nu_delta != 0.0 {
                    let dw = d_k.d.spmv(&w)?;
                    ed_solid = dt * nu_delta * mats_k.visc.quadratic_form(&dw);
                }
                let d_move = match self.settings.sampling {
                    SolidSampling::Start => &d_n.d,
                    SolidSampling::Tentative => &d_k.d,
                };
                let vel = to_points(&d_move.spmv(&w)?);
                let next = solid_n.update(&vel, dt)?;
                let coupling = self.couple(next.cur_coords(), t_next)?;
                (Some(next), Some(Arc::new(coupling)))
            }
            _ => (None, None),
        };

        let u_next = match self.scheme {
            Scheme::CrankNicolson => w.iter().zip(u_n).map(|(s, n)| 2.0 * s - n).collect(),
            Scheme::BackwardEuler => w,
        };
        Ok(StepOutcome {
            state: SimState {
                t: state.t + dt,
                step_index: state.step_index + 1,
                u: u_next,
                p,
                solid,
                coupling,
            },
            report,
            stats,
            dissipation: [ed_omega, ed_solid],
        })
    }

    /// Number of steps needed to reach `t_end` from `t0`.
    pub fn steps_until(&self, t0: f64, t_end: f64) -> usize {
        let n = (t_end - t0) / self.dt;
        if n <= 0.0 {
            0
        } else {
            (n - 1e-9).ceil() as usize
        }
    }

    /// Advances to `t_end`, handing every step to `on_step`. On error, the
    /// callback has seen every completed step.
    pub fn run<F>(&self, initial: SimState, t_end: f64, mut on_step: F) -> Result<SimState>
    where
        F: FnMut(&StepOutcome) -> Result<()>,
    {
        let n = self.steps_until(initial.t, t_end);
        let t0 = initial.t;
        let mut state = initial;
        for k in 1..=n {
            let mut out = self.step(&state)?;
            // avoid drift from repeated addition
            out.state.t = t0 + k as f64 * self.dt;
            on_step(&out)?;
            state = out.state;
        }
        Ok(state)
    }
}
