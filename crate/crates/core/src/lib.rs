pub mod brauer;
pub mod cli;
pub mod cochain;
pub mod coefficients;
pub mod cohomology;
pub mod error;
pub mod extension;
pub mod groupoid;
pub mod invariants;
pub mod linalg;
pub mod oracle;
pub mod types;

pub use error::{Error, Result};
