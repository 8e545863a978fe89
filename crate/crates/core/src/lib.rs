pub mod bath;
pub mod dephasing;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod quadrature;
pub mod qubit;
pub mod registry;

pub use error::{Error, Result};
