use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("incomplete Cholesky breakdown at row {row} (pivot {pivot:e})")]
    FactorizationBreakdown { row: usize, pivot: f64 },

    #[error("sparse factorization failed: {0}")]
    Factorization(String),

    #[error("MinRes diverged at iteration {iteration} (non-finite residual)")]
    Divergence { iteration: usize },

    #[error("preconditioner is not positive definite (r'z = {value:e} at iteration {iteration})")]
    IndefinitePreconditioner { iteration: usize, value: f64 },

    #[error("MinRes did not reach the tolerance in {iterations} iterations (relative residual {residual:e})")]
    SolverNotConverged { iterations: usize, residual: f64 },

    #[error("degenerate element {element}: signed area {area:e}")]
    Geometry { element: usize, area: f64 },

    #[error("solid element {element} inverted (signed area {area:e})")]
    Inversion { element: usize, area: f64 },

    #[error("point ({x}, {y}) is not inside any background element")]
    LocationFailure { x: f64, y: f64 },

    #[error("solid node {node} left the fluid domain at t = {t}")]
    SolidEscape { node: usize, t: f64 },

    #[error("fixed-point iteration did not converge after {iterations} iterations (increment {increment:e})")]
    FixedPointNotConverged { iterations: usize, increment: f64 },

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
