//! Growth series, spectral radius bounds and percolation phase certificates
//! for reflection groups of hyperbolic polyhedra.

pub mod cert;
pub mod coxeter;
mod error;
pub mod fixtures;
pub mod growth;
pub mod nerve;
pub mod oracle;
pub mod walks;

pub use error::{Error, ErrorKind};
