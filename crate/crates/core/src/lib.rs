//! Magnetic Steklov eigenvalues of the unit disk and its exterior.

pub mod asympt;
pub mod cli;
pub mod error;
pub mod intersect;
pub mod oracle;
pub mod roots;
pub mod specfun;
pub mod steklov;

pub use error::{Error, Result};
