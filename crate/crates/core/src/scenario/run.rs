use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use crate::diagnostics::{Accountant, CsvWriter, EnergyLedger};
use crate::error::{Error, Result};
use crate::mesh::vtk;
use crate::scenario::{initial_condition, ScenarioConfig};
use crate::stepper::{SimState, Simulation};

/// Result of a run. Setup failures are returned as `Err` by the runners;
/// failures during stepping end up in `error` next to the partial ledger.
#[derive(Debug)]
pub struct RunOutcome {
    pub ledger: Vec<EnergyLedger>,
    pub final_state: Option<SimState>,
    pub error: Option<Error>,
}

impl RunOutcome {
    pub fn last(&self) -> Option<&EnergyLedger> {
        self.ledger.last()
    }
}

fn drive(
    cfg: &ScenarioConfig,
    mut on_row: impl FnMut(&Simulation, &SimState, &EnergyLedger) -> Result<()>,
) -> Result<RunOutcome> {
    let prepared = initial_condition(cfg)?;
    let sim = prepared.sim;
    let mut acct = Accountant::new();
    let mut ledger = Vec::new();
    let row0 = acct.record(&sim, &prepared.state, None)?;
    on_row(&sim, &prepared.state, &row0)?;
    ledger.push(row0);
    let result = sim.run(prepared.state, cfg.t_end, |out| {
        let row = acct.record(&sim, &out.state, Some(out))?;
        on_row(&sim, &out.state, &row)?;
        ledger.push(row);
        Ok(())
    });
    let (final_state, error) = match result {
        Ok(s) => (Some(s), None),
        Err(e) => (None, Some(e)),
    };
    Ok(RunOutcome {
        ledger,
        final_state,
        error,
    })
}

/// Runs a scenario in memory.
pub fn simulate(cfg: &ScenarioConfig) -> Result<RunOutcome> {
    drive(cfg, |_, _, _| Ok(()))
}

fn write_snapshot(dir: &Path, sim: &Simulation, state: &SimState) -> Result<()> {
    let mesh = &sim.mesh;
    let dofs = &sim.dofs;
    let vel: Vec<_> = (0..mesh.n_vertices())
        .map(|v| dofs.node_velocity(&state.u, v))
        .collect();
    let pressure: Vec<f64> = (0..mesh.n_triangles())
        .map(|t| {
            let p1 = dofs.element_p1_dofs(mesh, t);
            let mean = p1.iter().map(|&i| state.p[i]).sum::<f64>() / 3.0;
            mean + dofs.element_p0_dof(t).map_or(0.0, |j| state.p[j])
        })
        .collect();
    let step = state.step_index;
    let f = BufWriter::new(File::create(dir.join(format!("fluid_{step:06}.vtk")))?);
    vtk::write_fluid(f, mesh, &vel, &pressure)?;
    if let (Some(solid), Some(c)) = (&state.solid, state.coupling()) {
        let sv = c.project_velocity(&state.u)?;
        let f = BufWriter::new(File::create(dir.join(format!("solid_{step:06}.vtk")))?);
        vtk::write_solid(f, solid, &sv)?;
    }
    Ok(())
}

/// Runs a scenario, writing the ledger CSV and VTK snapshots when an output
/// directory is configured.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunOutcome> {
    let Some(dir) = cfg.output.dir.clone() else {
        return simulate(cfg);
    };
    fs::create_dir_all(&dir)?;
    fs::write(dir.join("config.txt"), cfg.to_text())?;
    let mut csv = CsvWriter::new(BufWriter::new(File::create(dir.join(&cfg.output.csv))?))?;
    let every = cfg.output.every_n_steps;
    drive(cfg, |sim, state, row| {
        csv.write(row)?;
        if every > 0 && state.step_index % every == 0 {
            write_snapshot(&dir, sim, state)?;
        }
        Ok(())
    })
}
