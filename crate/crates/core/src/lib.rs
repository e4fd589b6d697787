pub mod analysis;
pub mod cli;
pub mod completion;
pub mod compound;
pub mod error;
pub mod io;
pub mod linalg;
pub mod majorization;
pub mod matrix;
pub mod numrange;
pub mod phase;
pub mod random;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{c64, ComplexMatrix};
