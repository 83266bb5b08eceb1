//! Matrices over R, C and the quaternions.

mod field;
mod matrix;
mod quaternion;
mod spectral;

pub use field::Field;
pub use matrix::{hermitian_coords, MatK};
pub use quaternion::Quaternion;
pub use spectral::{
    cholesky_upper, det, det_quaternion, gram_det, hermitian_eigenvalues, is_positive_definite,
    leading_minors_pd, operator_norm, singular_values,
};
