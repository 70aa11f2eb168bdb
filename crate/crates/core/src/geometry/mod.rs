pub mod ade;
pub mod hilbert;
pub mod local;
pub mod points;
