//! Exact computations with finite-dimensional dg algebras, dg bimodules and
//! one-sided twisted complexes over them.

pub mod dgalg;
pub mod dgbimod;
pub mod homotopy;
pub mod io;
pub mod error;
pub mod linalg;
pub mod report;
pub mod twisted;
pub mod twocat;
pub mod vvcat;
pub mod zoo;

pub use error::{DgError, Result};
pub use report::AlgebraReport;
