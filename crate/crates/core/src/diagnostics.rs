//! Energy and mass bookkeeping.

use std::io::Write;

use crate::assembly::assemble_solid_matrices;
use crate::error::Result;
use crate::la::sparse::SparseMatrix;
use crate::mesh::solid::SolidState;
use crate::stepper::{SimState, Simulation, StepOutcome};

pub const CSV_HEADER: &str =
    "step,t,Ek_omega,Ek_solid,Ed_omega,Ed_solid,Ep_solid,E_total,Err,mass_variation,fp_iters,minres_iters";

/// One ledger row. `e_total` is the sum of the five energy terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLedger {
    pub step: usize,
    pub t: f64,
    pub ek_omega: f64,
    pub ek_solid: f64,
    pub ed_omega: f64,
    pub ed_solid: f64,
    pub ep_solid: f64,
    pub e_total: f64,
    pub err: f64,
    pub mass_variation: f64,
    pub fp_iters: usize,
    pub minres_iters: usize,
}

impl EnergyLedger {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{},{}",
            self.step,
            self.t,
            self.ek_omega,
            self.ek_solid,
            self.ed_omega,
            self.ed_solid,
            self.ep_solid,
            self.e_total,
            self.err,
            self.mass_variation,
            self.fp_iters,
            self.minres_iters
        )
    }
}

/// `1/2 rho u^T M0 u`.
pub fn kinetic_energy(u: &[f64], m0: &SparseMatrix, rho: f64) -> f64 {
    0.5 * rho * m0.quadratic_form(u)
}

/// `dt u^T K u` for a viscous matrix `K`.
pub fn dissipation_increment(u: &[f64], k: &SparseMatrix, dt: f64) -> f64 {
    dt * k.quadratic_form(u)
}

/// `sum_e |X_e| mu_s (|F_e|^2 - 2 - 2 ln J_e) / 2`.
///
/// The logarithm is the potential of the `-J^{-1} mu_s I` shift in the solid
/// stress. It vanishes for incompressible motion, but the interpolated solid
/// velocity is only approximately divergence free, and without it the ledger
/// drifts by roughly `mu_s |X| mass_variation`.
pub fn potential_energy(solid: &SolidState, mu_s: f64) -> f64 {
    (0..solid.n_elements())
        .map(|e| {
            let f = solid.deformation_gradient(e);
            let fro = f[0][0] * f[0][0] + f[0][1] * f[0][1] + f[1][0] * f[1][0] + f[1][1] * f[1][1];
            let j = f[0][0] * f[1][1] - f[0][1] * f[1][0];
            solid.ref_area(e) * 0.5 * mu_s * (fro - 2.0 - 2.0 * j.ln())
        })
        .sum()
}

pub fn solid_mass_variation(solid: &SolidState) -> f64 {
    (solid.total_current_area() - solid.initial_area()) / solid.initial_area()
}

pub fn err_total(now: f64, initial: f64) -> f64 {
    now - initial
}

/// Accumulates dissipation and produces ledger rows.
#[derive(Debug, Clone, Default)]
pub struct Accountant {
    e0: Option<f64>,
    ed_omega: f64,
    ed_solid: f64,
}

impl Accountant {
    pub fn new() -> Self {
        Self::default()
    }

    /// Row for `state`; `outcome` is `None` for the initial state.
    pub fn record(
        &mut self,
        sim: &Simulation,
        state: &SimState,
        outcome: Option<&StepOutcome>,
    ) -> Result<EnergyLedger> {
        if let Some(o) = outcome {
            self.ed_omega += o.dissipation[0];
            self.ed_solid += o.dissipation[1];
        }
        let p = &sim.params;
        let ek_omega = kinetic_energy(&state.u, &sim.fluid.m0, p.rho_f);
        let (mut ek_solid, mut ep_solid, mut mass_variation) = (0.0, 0.0, 0.0);
        if let (Some(solid), Some(c)) = (&state.solid, state.coupling()) {
            let rho_delta = p.rho_delta();
            if rho_delta != 0.0 {
                let mats = assemble_solid_matrices(solid)?;
                let du = c.d.spmv(&state.u)?;
                ek_solid = kinetic_energy(&du, &mats.ms0, rho_delta);
            }
            ep_solid = potential_energy(solid, p.mu_s);
            mass_variation = solid_mass_variation(solid);
        }
        let e_total = ek_omega + ek_solid + self.ed_omega + self.ed_solid + ep_solid;
        let e0 = *self.e0.get_or_insert(e_total);
        Ok(EnergyLedger {
            step: state.step_index,
            t: state.t,
            ek_omega,
            ek_solid,
            ed_omega: self.ed_omega,
            ed_solid: self.ed_solid,
            ep_solid,
            e_total,
            err: err_total(e_total, e0),
            mass_variation,
            fp_iters: outcome.map_or(0, |o| o.report.iterations),
            minres_iters: outcome.map_or(0, |o| o.stats.iterations),
        })
    }
}

/// Writes ledger rows, flushing after each one.
pub struct CsvWriter<W: Write> {
    out: W,
}

impl<W: Write> CsvWriter<W> {
    pub fn new(mut out: W) -> Result<Self> {
        writeln!(out, "{CSV_HEADER}")?;
        out.flush()?;
        Ok(Self { out })
    }

    pub fn write(&mut self, row: &EnergyLedger) -> Result<()> {
        writeln!(self.out, "{}", row.csv_line())?;
        self.out.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}
