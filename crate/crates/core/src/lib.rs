pub mod assembly;
pub mod coupling;
pub mod diagnostics;
pub mod error;
pub mod fem;
pub mod la;
pub mod mesh;
pub mod scenario;
pub mod stepper;

pub use error::{Error, Result};
