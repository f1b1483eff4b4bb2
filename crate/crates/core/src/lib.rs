// Quadrature nodes and reference values are quoted to the digits they were published or computed with.
#![allow(clippy::excessive_precision)]

pub mod cli;
pub mod decoherence;
pub mod error;
pub mod estimation;
pub mod fit;
pub mod optimizer;
pub mod probe;
pub mod quadrature;
pub mod specfun;
pub mod validation;

pub use error::{Error, Result};
