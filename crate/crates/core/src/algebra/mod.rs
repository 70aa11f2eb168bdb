//! Coefficient domains, polynomials, forms and exact linear algebra.

pub mod dual;
pub mod form;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod residue;
pub mod resultant;
pub mod scalar;
pub mod shear;
pub mod upoly;
