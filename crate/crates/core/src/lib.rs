pub mod algebra;
pub mod blueprint;
pub mod config;
pub mod darboux;
pub mod error;
pub mod eta;
pub mod frommer;
pub mod geometry;
pub mod projective;
pub mod zeros;

pub use algebra::scalar::{Fp, Scalar, F29, Q};
pub use error::{Error, Result};
