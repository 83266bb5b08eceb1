//! Rayleigh tables of corner spectra, their joint density in continuous
//! dimension d, and the interpolated beta integrals over tables.

mod integrals;
mod table;

pub use integrals::{
    interp_beta_mc, interp_beta_rhs, interp_beta_rhs_published, interp_integrand,
    ln_rayleigh_constant, matrix_beta_mc, matrix_integrand, rayleigh_log_density,
    rayleigh_log_density_d2, sample_table_proposal, table_proposal, theta_beta_mc, theta_beta_rhs,
    theta_integrand, theta_log_measure, RAYLEIGH_NOTE,
};
pub use table::{corners_to_table, RayleighTable, ThetaTable};
