//! Gindikin gamma and beta integrals over the cone of positive definite
//! Hermitian matrices, with corner-determinant exponents.

use std::f64::consts::PI;

use crate::algebra::{hermitian_coords, leading_minors_pd, Field, MatK};
use crate::error::{Error, Result};
use crate::integrate::{
    mc_integrate, quad_adaptive, BoxUniform, DiagonalLaw, GammaCone, IteratedRegion, MCEstimate,
    OffDiagonalLaw, QuadOptions, QuadResult, SignedLn,
};
use crate::special::GammaProduct;

/// Note carried by every Gindikin report and listing.
pub const GINDIKIN_SIGN_NOTE: &str = "sign convention: negative exponent adopted";

/// Note on the constant in front of the gamma product.
pub const GINDIKIN_CONSTANT_NOTE: &str =
    "constant: π^{n(n-1)d/4} used; the published (2π)^{n(n-1)d/4} disagrees with direct integration";

/// Exponent κ = d(n-1)/2 + 1 of det X in the invariant measure on Pos_n(K).
pub fn invariant_exponent(field: Field, n: usize) -> f64 {
    0.5 * field.d() * (n as f64 - 1.0) + 1.0
}

fn check_gamma_args(field: Field, s: &[f64], name: &str) -> Result<()> {
    if s.is_empty() {
        return Err(Error::InvalidParameter(format!("`{name}` must have at least one entry")));
    }
    let g = 0.5 * field.d();
    for (k, &v) in s.iter().enumerate() {
        if !(v - k as f64 * g > 0.0) {
            return Err(Error::domain(format!(
                "{name}_{} - {}·d/2 = {} must be positive",
                k + 1,
                k,
                v - k as f64 * g
            )));
        }
    }
    Ok(())
}

fn ln_gamma_cone(field: Field, s: &[f64]) -> Result<GammaProduct> {
    check_gamma_args(field, s, "s")?;
    let n = s.len() as f64;
    let g = 0.5 * field.d();
    let mut p = GammaProduct::one().pow(PI, n * (n - 1.0) * field.d() / 4.0);
    for (k, &v) in s.iter().enumerate() {
        p = p.gamma(v - k as f64 * g)?;
    }
    Ok(p)
}

/// Γ_K[s] = π^{n(n-1)d/4} ∏_k Γ(s_k - (k-1)d/2).
pub fn gindikin_gamma_rhs(field: Field, s: &[f64]) -> Result<f64> {
    Ok(ln_gamma_cone(field, s)?.real())
}

/// The gamma product with the published (2π)^{n(n-1)d/4} prefactor.
pub fn gindikin_gamma_published(field: Field, s: &[f64]) -> Result<f64> {
    let n = s.len() as f64;
    Ok(gindikin_gamma_rhs(field, s)? * 2f64.powf(n * (n - 1.0) * field.d() / 4.0))
}

/// At n = 1 the positive measure exponent turns ∫ e^{-x} x^{s-1} dx into
/// Γ(s+2) instead of Γ(s).
pub fn gindikin_n1_values(s1: f64) -> Result<(f64, f64)> {
    Ok((crate::special::gamma(s1)?, crate::special::gamma(s1 + 2.0)?))
}

/// B_K[s, t] = Γ_K[s] Γ_K[t] / Γ_K[s+t].
pub fn gindikin_beta_rhs(field: Field, s: &[f64], t: &[f64]) -> Result<f64> {
    if s.len() != t.len() {
        return Err(Error::InvalidParameter(format!(
            "`s` and `t` differ in length ({} vs {})",
            s.len(),
            t.len()
        )));
    }
    check_gamma_args(field, t, "t")?;
    let st: Vec<f64> = s.iter().zip(t).map(|(a, b)| a + b).collect();
    let num = ln_gamma_cone(field, s)?.ln() + ln_gamma_cone(field, t)?.ln();
    Ok((num - ln_gamma_cone(field, &st)?.ln()).re.exp())
}

fn ln_corner_power(minors: &[f64], s: &[f64]) -> f64 {
    let n = s.len();
    (0..n)
        .map(|j| {
            let next = if j + 1 < n { s[j + 1] } else { 0.0 };
            (s[j] - next) * minors[j].ln()
        })
        .sum()
}

/// e^{-tr X} ∏ det[X]_j^{s_j-s_{j+1}} det X^{-κ} on hermitian coordinates.
pub fn gindikin_gamma_integrand(field: Field, s: Vec<f64>) -> impl Fn(&[f64]) -> SignedLn + Sync {
    let n = s.len();
    let kappa = invariant_exponent(field, n);
    move |x: &[f64]| {
        let m = hermitian_coords::to_matrix(field, n, x);
        match leading_minors_pd(&m) {
            Some(minors) => {
                let tr: f64 = x[..n].iter().sum();
                SignedLn::positive(-tr + ln_corner_power(&minors, &s) - kappa * minors[n - 1].ln())
            }
            None => SignedLn::ZERO,
        }
    }
}

/// ∏ det[X]_j^{s_j-s_{j+1}} det[1-X]_j^{t_j-t_{j+1}} (det X det(1-X))^{-κ}
/// on 0 < X < 1.
pub fn gindikin_beta_integrand(
    field: Field,
    s: Vec<f64>,
    t: Vec<f64>,
) -> impl Fn(&[f64]) -> SignedLn + Sync {
    let n = s.len();
    let kappa = invariant_exponent(field, n);
    move |x: &[f64]| {
        let m = hermitian_coords::to_matrix(field, n, x);
        let c = &MatK::identity(field, n) - &m;
        match (leading_minors_pd(&m), leading_minors_pd(&c)) {
            (Some(a), Some(b)) => SignedLn::positive(
                ln_corner_power(&a, &s) + ln_corner_power(&b, &t)
                    - kappa * (a[n - 1].ln() + b[n - 1].ln()),
            ),
            _ => SignedLn::ZERO,
        }
    }
}

/// Iterated limits for n ≤ 2 positive matrices whose diagonal lies in
/// (0, top) and whose off-diagonal entry is bounded by `bound(x11, x22)`.
fn cone_region(
    field: Field,
    n: usize,
    top: f64,
    bound: impl Fn(f64, f64) -> f64,
) -> Result<IteratedRegion<impl Fn(usize, &[f64]) -> (f64, f64)>> {
    let dim = hermitian_coords::dim(field, n);
    if n > 2 || dim > 4 {
        return Err(Error::Unsupported(format!(
            "quadrature over {n}×{n} matrices over {field} ({dim} real dimensions)"
        )));
    }
    Ok(IteratedRegion::new(dim, move |level: usize, outer: &[f64]| {
        if level < n {
            return (0.0, top);
        }
        let r2 = bound(outer[0], outer[1]).powi(2) - outer[2..level].iter().map(|v| v * v).sum::<f64>();
        let r = r2.max(0.0).sqrt();
        (-r, r)
    }))
}

/// Quadrature of the gamma integral for n ≤ 2 and at most 4 real dimensions.
pub fn gindikin_gamma_quadrature(field: Field, s: &[f64], opts: &QuadOptions) -> Result<QuadResult> {
    check_gamma_args(field, s, "s")?;
    let g = gindikin_gamma_integrand(field, s.to_vec());
    let f = |x: &[f64]| g(x).value();
    let region = cone_region(field, s.len(), f64::INFINITY, |a, b| (a * b).sqrt())?;
    quad_adaptive(&f, &region, opts)
}

/// Quadrature of the beta integral for n ≤ 2 and at most 4 real dimensions.
pub fn gindikin_beta_quadrature(field: Field, s: &[f64], t: &[f64], opts: &QuadOptions) -> Result<QuadResult> {
    gindikin_beta_rhs(field, s, t)?;
    let g = gindikin_beta_integrand(field, s.to_vec(), t.to_vec());
    let f = |x: &[f64]| g(x).value();
    let region = cone_region(field, s.len(), 1.0, |a, b| (a * b).sqrt().min(((1.0 - a) * (1.0 - b)).sqrt()))?;
    quad_adaptive(&f, &region, opts)
}

/// Monte Carlo over Pos_n(K) with a cone sampler whose gamma shapes and
/// off-diagonal spread are deliberately detuned from the integrand.
pub fn gindikin_gamma_mc(field: Field, s: &[f64], samples: u64, seed: u64) -> Result<MCEstimate> {
    check_gamma_args(field, s, "s")?;
    let g = 0.5 * field.d();
    let shapes = s.iter().enumerate().map(|(k, &v)| 0.9 * (v - k as f64 * g)).collect();
    let proposal = GammaCone::new(
        field,
        s.len(),
        DiagonalLaw::Gamma { shapes, scale: 1.2 },
        OffDiagonalLaw::Normal { sd: 0.85 },
    )?;
    mc_integrate(gindikin_gamma_integrand(field, s.to_vec()), &proposal, samples, seed)
}

/// Monte Carlo over 0 < X < 1 by uniform sampling of the enclosing box.
pub fn gindikin_beta_mc(field: Field, s: &[f64], t: &[f64], samples: u64, seed: u64) -> Result<MCEstimate> {
    gindikin_beta_rhs(field, s, t)?;
    let n = s.len();
    let dim = hermitian_coords::dim(field, n);
    let bounds = (0..dim).map(|k| if k < n { (0.0, 1.0) } else { (-0.5, 0.5) }).collect();
    let proposal = BoxUniform::new(bounds)?;
    mc_integrate(gindikin_beta_integrand(field, s.to_vec(), t.to_vec()), &proposal, samples, seed)
}
