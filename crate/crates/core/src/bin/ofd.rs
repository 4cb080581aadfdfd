use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use ofd_core::assembly::{DofMap, ElementKind, Scheme};
use ofd_core::diagnostics::{EnergyLedger, CSV_HEADER};
use ofd_core::mesh::trimesh::TriMesh;
use ofd_core::scenario::sweep::worker_count;
use ofd_core::scenario::{build_solid, convergence_sweep, run_scenario, ScenarioConfig};
use ofd_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "ofd",
    version,
    about = "One-field fictitious-domain FSI simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its ledger.
    Run {
        config: PathBuf,
        #[command(flatten)]
        opts: Overrides,
        /// Print every ledger row to stderr.
        #[arg(long)]
        verbose: bool,
    },
    /// Run a scenario for several time steps and fit the order of |Err|.
    Sweep {
        config: PathBuf,
        /// Comma-separated geometric sequence of time steps.
        #[arg(long, value_delimiter = ',', required = true)]
        dt: Vec<f64>,
        #[command(flatten)]
        opts: Overrides,
    },
    /// Print mesh and unknown counts.
    MeshInfo {
        config: PathBuf,
        #[command(flatten)]
        opts: Overrides,
    },
}

#[derive(Args)]
struct Overrides {
    #[arg(long)]
    scheme: Option<Scheme>,
    #[arg(long)]
    element: Option<ElementKind>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    /// Extra `key=value` settings applied after the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn load(path: &PathBuf, o: &Overrides) -> Result<ScenarioConfig> {
    let mut text = std::fs::read_to_string(path)?;
    for kv in &o.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Argument(format!("--set expects KEY=VALUE, got '{kv}'")))?;
        text.push_str(&format!("\n{} = {}", k.trim(), v.trim()));
    }
    let mut cfg = ScenarioConfig::parse(&text)?;
    if let Some(p) = &o.preset {
        cfg.apply_preset(p)?;
    }
    if let Some(s) = o.scheme {
        cfg.scheme = s;
    }
    if let Some(e) = o.element {
        cfg.element = e;
    }
    if let Some(d) = &o.out {
        cfg.output.dir = Some(d.clone());
    }
    Ok(cfg)
}

fn print_row(row: &EnergyLedger) {
    eprintln!("{}", row.csv_line());
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            opts,
            verbose,
        } => {
            let cfg = load(&config, &opts)?;
            let start = Instant::now();
            let out = run_scenario(&cfg)?;
            if verbose {
                eprintln!("{CSV_HEADER}");
                out.ledger.iter().for_each(print_row);
            }
            println!("{CSV_HEADER}");
            if let Some(last) = out.last() {
                println!("{}", last.csv_line());
            }
            eprintln!("elapsed {:.1} s", start.elapsed().as_secs_f64());
            match out.error {
                Some(e) => Err(e),
                None => Ok(()),
            }
        }
        Command::Sweep { config, dt, opts } => {
            let cfg = load(&config, &opts)?;
            let report = convergence_sweep(&cfg, &dt, worker_count())?;
            println!("{report}");
            Ok(())
        }
        Command::MeshInfo { config, opts } => {
            let cfg = load(&config, &opts)?;
            let mesh = TriMesh::unit_square(
                cfg.mesh_n,
                cfg.bc == ofd_core::assembly::BoundaryKind::Periodic,
            )?;
            let dofs = DofMap::new(&mesh, cfg.bc, cfg.element)?;
            println!(
                "fluid: {} triangles, {} vertices, {} edges, h = {}",
                mesh.n_triangles(),
                mesh.n_vertices(),
                mesh.n_edges(),
                mesh.h()
            );
            println!(
                "unknowns: {} velocity, {} pressure",
                dofs.n_free_u(),
                dofs.n_p()
            );
            if cfg.has_solid() {
                let s = build_solid(&cfg)?;
                println!(
                    "solid: {} nodes, {} elements, area {:.6}",
                    s.n_nodes(),
                    s.n_elements(),
                    s.total_current_area()
                );
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
