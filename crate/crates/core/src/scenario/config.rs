//! Flat `key = value` scenario files with dotted section keys and `#` comments.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::assembly::{BoundaryKind, ElementKind, ModelParams, Scheme};
use crate::error::{Error, Result};
use crate::mesh::trimesh::Point;
use crate::stepper::{NonConvergence, Relaxation, SolidSampling};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// Periodic flow carrying a disc, started from a stream function.
    DiscKinetic,
    /// Pre-stretched quarter disc released from rest.
    DiscPotential,
    /// Fluid-only Taylor-Green vortex.
    TaylorGreen,
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disc_kinetic" => Ok(Self::DiscKinetic),
            "disc_potential" => Ok(Self::DiscPotential),
            "taylor_green_fluid_only" | "taylor_green" => Ok(Self::TaylorGreen),
            _ => Err(Error::Argument(format!("unknown scenario '{s}'"))),
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::DiscKinetic => "disc_kinetic",
            Self::DiscPotential => "disc_potential",
            Self::TaylorGreen => "taylor_green_fluid_only",
        })
    }
}

impl FromStr for SolidSampling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "start" => Ok(Self::Start),
            "tentative" => Ok(Self::Tentative),
            _ => Err(Error::Argument(format!("unknown solid sampling '{s}'"))),
        }
    }
}

impl fmt::Display for SolidSampling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Start => "start",
            Self::Tentative => "tentative",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolidConfig {
    pub center: Point,
    pub radius: f64,
    /// Solid node spacing; `None` follows the fluid mesh size.
    pub target_h: Option<f64>,
    pub quarter: bool,
    /// Initial stretch along x (y uses the reciprocal).
    pub stretch_kx: f64,
    pub sampling: SolidSampling,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    /// `None` disables file output.
    pub dir: Option<PathBuf>,
    pub csv: String,
    /// VTK cadence in steps; 0 disables snapshots.
    pub every_n_steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub mesh_n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    pub element: ElementKind,
    pub bc: BoundaryKind,
    pub preset: Option<String>,
    pub params: ModelParams,
    pub stream_amplitude: f64,
    pub convection: bool,
    pub solid: SolidConfig,
    pub solver_tol: f64,
    pub solver_max_iters: usize,
    pub fp_tol: f64,
    pub fp_max_iters: usize,
    pub on_nonconvergence: NonConvergence,
    pub relaxation: Relaxation,
    pub output: OutputConfig,
}

impl ScenarioConfig {
    pub fn defaults(kind: ScenarioKind) -> Self {
        let solid = SolidConfig {
            center: [0.5, 0.5],
            radius: 0.2,
            target_h: None,
            quarter: false,
            stretch_kx: 1.0,
            sampling: SolidSampling::Start,
        };
        let mut c = Self {
            scenario: kind,
            mesh_n: 50,
            dt: 1e-2,
            t_end: 1.0,
            scheme: Scheme::CrankNicolson,
            element: ElementKind::P2P1P0,
            bc: BoundaryKind::Periodic,
            preset: Some("param1".into()),
            params: ModelParams::param1(),
            stream_amplitude: 0.05,
            convection: true,
            solid,
            solver_tol: 1e-8,
            solver_max_iters: 2000,
            fp_tol: 1e-6,
            fp_max_iters: 50,
            on_nonconvergence: NonConvergence::Abort,
            relaxation: Relaxation::None,
            output: OutputConfig {
                dir: None,
                csv: "ledger.csv".into(),
                every_n_steps: 0,
            },
        };
        match kind {
            ScenarioKind::DiscKinetic => {}
            ScenarioKind::DiscPotential => {
                c.bc = BoundaryKind::Freeslip;
                c.preset = None;
                c.params = ModelParams {
                    rho_f: 1.0,
                    rho_s: 2.0,
                    nu_f: 0.01,
                    nu_s: 0.01,
                    mu_s: 2.0,
                };
                c.stream_amplitude = 0.0;
                c.solid.center = [0.0, 0.0];
                c.solid.radius = 0.3;
                c.solid.quarter = true;
                c.solid.stretch_kx = 1.4;
            }
            ScenarioKind::TaylorGreen => {
                c.dt = 1e-3;
                c.t_end = 0.1;
                c.preset = None;
                c.params = ModelParams {
                    rho_f: 1.0,
                    rho_s: 1.0,
                    nu_f: 0.01,
                    nu_s: 0.01,
                    mu_s: 0.0,
                };
            }
        }
        c
    }

    pub fn has_solid(&self) -> bool {
        self.scenario != ScenarioKind::TaylorGreen
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::Argument(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_end >= 0.0) {
            return Err(Error::Argument(format!(
                "t_end must be non-negative, got {}",
                self.t_end
            )));
        }
        if self.mesh_n == 0 {
            return Err(Error::Argument("mesh_n must be at least 1".into()));
        }
        self.params.validate()
    }

    pub fn apply_preset(&mut self, name: &str) -> Result<()> {
        self.params = ModelParams::preset(name)?;
        self.preset = Some(name.to_string());
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Config {
                line: i + 1,
                message: format!("expected 'key = value', got '{line}'"),
            })?;
            entries.push((i + 1, k.trim().to_string(), v.trim().to_string()));
        }
        let kind = match entries.iter().find(|(_, k, _)| k == "scenario") {
            Some((line, _, v)) => v.parse().map_err(|e: Error| Error::Config {
                line: *line,
                message: e.to_string(),
            })?,
            None => {
                return Err(Error::Config {
                    line: 0,
                    message: "missing 'scenario' key".into(),
                })
            }
        };
        let mut cfg = Self::defaults(kind);
        // a preset sets all parameters; explicit keys override it
        if let Some((line, _, v)) = entries.iter().find(|(_, k, _)| k == "preset") {
            if v == "none" {
                cfg.preset = None;
            } else {
                cfg.apply_preset(v).map_err(|e| Error::Config {
                    line: *line,
                    message: e.to_string(),
                })?;
            }
        }
        for (line, k, v) in &entries {
            cfg.set(k, v).map_err(|e| Error::Config {
                line: *line,
                message: e.to_string(),
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::Argument(format!("invalid value '{v}' for {key}")))
        }
        fn point(key: &str, v: &str) -> Result<Point> {
            let parts: Vec<&str> = v.split(',').map(str::trim).collect();
            match parts.as_slice() {
                [x, y] => Ok([num(key, x)?, num(key, y)?]),
                _ => Err(Error::Argument(format!("{key} expects 'x, y', got '{v}'"))),
            }
        }
        match key {
            "scenario" | "preset" => {}
            "mesh_n" => self.mesh_n = num(key, v)?,
            "dt" => self.dt = num(key, v)?,
            "t_end" => self.t_end = num(key, v)?,
            "scheme" => self.scheme = v.parse()?,
            "element" => self.element = v.parse()?,
            "bc" => self.bc = v.parse()?,
            "convection" => self.convection = num(key, v)?,
            "stream_amplitude" => self.stream_amplitude = num(key, v)?,
            "params.rho_f" => self.params.rho_f = num(key, v)?,
            "params.rho_s" => self.params.rho_s = num(key, v)?,
            "params.nu_f" => self.params.nu_f = num(key, v)?,
            "params.nu_s" => self.params.nu_s = num(key, v)?,
            "params.mu_s" => self.params.mu_s = num(key, v)?,
            "solid.center" => self.solid.center = point(key, v)?,
            "solid.radius" => self.solid.radius = num(key, v)?,
            "solid.target_h" => {
                self.solid.target_h = if v == "auto" {
                    None
                } else {
                    Some(num(key, v)?)
                };
            }
            "solid.quarter" => self.solid.quarter = num(key, v)?,
            "solid.stretch_kx" => self.solid.stretch_kx = num(key, v)?,
            "solid.sampling" => self.solid.sampling = v.parse()?,
            "solver.tol" => self.solver_tol = num(key, v)?,
            "solver.max_iters" => self.solver_max_iters = num(key, v)?,
            "fixed_point.tol" => self.fp_tol = num(key, v)?,
            "fixed_point.max_iters" => self.fp_max_iters = num(key, v)?,
            "fixed_point.on_nonconvergence" => self.on_nonconvergence = v.parse()?,
            "fixed_point.relaxation" => self.relaxation = v.parse()?,
            "output.dir" => {
                self.output.dir = if v == "none" {
                    None
                } else {
                    Some(PathBuf::from(v))
                }
            }
            "output.csv" => self.output.csv = v.to_string(),
            "output.every_n_steps" => self.output.every_n_steps = num(key, v)?,
            _ => return Err(Error::Argument(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let p = &self.params;
        let s = &self.solid;
        let mut lines = vec![
            format!("scenario = {}", self.scenario),
            format!("preset = {}", self.preset.as_deref().unwrap_or("none")),
            format!("mesh_n = {}", self.mesh_n),
            format!("dt = {}", self.dt),
            format!("t_end = {}", self.t_end),
            format!("scheme = {}", self.scheme),
            format!("element = {}", self.element),
            format!("bc = {}", self.bc),
            format!("convection = {}", self.convection),
            format!("stream_amplitude = {}", self.stream_amplitude),
            format!("params.rho_f = {}", p.rho_f),
            format!("params.rho_s = {}", p.rho_s),
            format!("params.nu_f = {}", p.nu_f),
            format!("params.nu_s = {}", p.nu_s),
            format!("params.mu_s = {}", p.mu_s),
            format!("solid.center = {}, {}", s.center[0], s.center[1]),
            format!("solid.radius = {}", s.radius),
            format!(
                "solid.target_h = {}",
                s.target_h.map_or("auto".to_string(), |h| h.to_string())
            ),
            format!("solid.quarter = {}", s.quarter),
            format!("solid.stretch_kx = {}", s.stretch_kx),
            format!("solid.sampling = {}", s.sampling),
            format!("solver.tol = {}", self.solver_tol),
            format!("solver.max_iters = {}", self.solver_max_iters),
            format!("fixed_point.tol = {}", self.fp_tol),
            format!("fixed_point.max_iters = {}", self.fp_max_iters),
            format!("fixed_point.on_nonconvergence = {}", self.on_nonconvergence),
            format!("fixed_point.relaxation = {}", self.relaxation),
        ];
        lines.push(format!(
            "output.dir = {}",
            self.output
                .dir
                .as_ref()
                .map_or("none".to_string(), |d| d.display().to_string())
        ));
        lines.push(format!("output.csv = {}", self.output.csv));
        lines.push(format!(
            "output.every_n_steps = {}",
            self.output.every_n_steps
        ));
        let mut text = lines.join("\n");
        text.push('\n');
        text
    }
}
