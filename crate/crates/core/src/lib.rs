//! Closed forms and independent numerical verification for matrix
//! beta-integral identities: scalar and Selberg integrals, Hua and Gindikin
//! integrals over symmetric spaces, Rayleigh-table interpolations, flag-space
//! integrals and lattice zeta sums.

pub mod algebra;
pub mod error;
pub mod flag;
pub mod integrate;
pub mod lattice;
pub mod params;
pub mod rayleigh;
pub mod registry;
pub mod special;
pub mod symmetric;

pub use algebra::{Field, MatK, Quaternion};
pub use error::{Error, Result};
pub use params::{ParamMap, ParamValue};
pub use num_complex::Complex64;
