//! Hua, Gindikin, wedge and O(p,q) integrals over matrix spaces, with the
//! spectral reductions that connect them to Selberg integrals.

pub mod eigen;
pub mod gindikin;
pub mod hua;
pub mod opq;
pub mod projection;
pub mod wedge;

pub use eigen::{
    dual_coordinate_check, eigen_reduction_constant, singular_value_density, weyl_reduce,
    DualCoordinateCheck, RadialTest,
};
pub use gindikin::{gindikin_beta_rhs, gindikin_gamma_published, gindikin_gamma_rhs};
pub use hua::{hua_ball_rhs, hua_symm_rhs};
pub use opq::{opq_rhs, opq_rhs_published};
pub use projection::{projection_constant, projection_identity_check, ProjectionTest};
pub use wedge::wedge_rhs;
