//! Log-gamma, Riemann zeta and closed-form right-hand sides of the scalar
//! and Selberg-type identities.

mod closed;
mod gamma;
mod zeta;

pub use closed::{
    beta_halfline, cauchy_beta, euler_beta, lobachevsky, scalar_closed_form, selberg_closed_form,
    wilson, ScalarIdentity, SelbergParams, SelbergVariant,
};
pub use gamma::{gamma, ln_gamma, ln_gamma_real, GammaProduct};
pub use zeta::riemann_zeta;
