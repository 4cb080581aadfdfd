use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Material parameters. Solid-side forms use the jumps `rho_s - rho_f` and
/// `nu_s - nu_f`, which may be negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub rho_f: f64,
    pub rho_s: f64,
    pub nu_f: f64,
    pub nu_s: f64,
    pub mu_s: f64,
}

impl ModelParams {
    pub fn new(rho_f: f64, rho_s: f64, nu_f: f64, nu_s: f64, mu_s: f64) -> Result<Self> {
        let p = Self {
            rho_f,
            rho_s,
            nu_f,
            nu_s,
            mu_s,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho_f > 0.0) {
            return Err(Error::Argument(format!(
                "rho_f must be positive, got {}",
                self.rho_f
            )));
        }
        if !(self.nu_f > 0.0) {
            return Err(Error::Argument(format!(
                "nu_f must be positive, got {}",
                self.nu_f
            )));
        }
        if !(self.mu_s >= 0.0) {
            return Err(Error::Argument(format!(
                "mu_s must be non-negative, got {}",
                self.mu_s
            )));
        }
        if !(self.rho_s.is_finite() && self.nu_s.is_finite()) {
            return Err(Error::Argument(
                "solid density and viscosity must be finite".into(),
            ));
        }
        Ok(())
    }

    pub fn rho_delta(&self) -> f64 {
        self.rho_s - self.rho_f
    }

    pub fn nu_delta(&self) -> f64 {
        self.nu_s - self.nu_f
    }

    /// Parameter set 1 of the oscillating-disc test.
    pub fn param1() -> Self {
        Self {
            rho_f: 1.0,
            rho_s: 1.0,
            nu_f: 0.01,
            nu_s: 0.01,
            mu_s: 1.0,
        }
    }

    /// Parameter set 2 of the oscillating-disc test.
    pub fn param2() -> Self {
        Self {
            rho_f: 1.0,
            rho_s: 10.0,
            nu_f: 0.01,
            nu_s: 0.0,
            mu_s: 10.0,
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "param1" => Ok(Self::param1()),
            "param2" => Ok(Self::param2()),
            _ => Err(Error::Argument(format!(
                "unknown parameter preset '{name}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    CrankNicolson,
    BackwardEuler,
}

impl Scheme {
    /// Time-derivative factor: the linear system is written for `u_*` (CN) or
    /// `u_{n+1}` (BE), so the mass terms carry `c / dt`.
    pub fn c(self) -> f64 {
        match self {
            Self::CrankNicolson => 2.0,
            Self::BackwardEuler => 1.0,
        }
    }

    /// Coefficient of the reference-configuration stiffness term.
    pub fn gamma(self, mu_s: f64, dt: f64) -> f64 {
        match self {
            Self::CrankNicolson => 0.5 * mu_s * dt,
            Self::BackwardEuler => mu_s * dt,
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cn" => Ok(Self::CrankNicolson),
            "be" => Ok(Self::BackwardEuler),
            _ => Err(Error::Argument(format!(
                "unknown scheme '{s}' (expected cn or be)"
            ))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::CrankNicolson => "cn",
            Self::BackwardEuler => "be",
        })
    }
}
