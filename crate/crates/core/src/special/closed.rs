//! Gamma-product right-hand sides of the one-dimensional and Selberg-type
//! identities.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ParamMap;
use crate::special::gamma::GammaProduct;

/// One-dimensional beta-type identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalarIdentity {
    Euler,
    Cauchy,
    Beta3,
    Lobachevsky,
    Wilson,
}

impl ScalarIdentity {
    pub const ALL: [ScalarIdentity; 5] = [
        ScalarIdentity::Euler,
        ScalarIdentity::Cauchy,
        ScalarIdentity::Beta3,
        ScalarIdentity::Lobachevsky,
        ScalarIdentity::Wilson,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ScalarIdentity::Euler => "euler",
            ScalarIdentity::Cauchy => "cauchy",
            ScalarIdentity::Beta3 => "beta3",
            ScalarIdentity::Lobachevsky => "lobachevsky",
            ScalarIdentity::Wilson => "wilson",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.id() == id)
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Γ(α)Γ(β)/Γ(α+β), for Re α > 0 and Re β > 0.
pub fn euler_beta(alpha: Complex64, beta: Complex64) -> Result<Complex64> {
    if alpha.re <= 0.0 || beta.re <= 0.0 {
        return Err(Error::domain("Euler beta needs Re α > 0 and Re β > 0"));
    }
    Ok(GammaProduct::one()
        .gamma(alpha)?
        .gamma(beta)?
        .inv_gamma(alpha + beta)?
        .value())
}

/// 2^{2-μ-ν} π Γ(μ+ν-1)/(Γ(μ)Γ(ν)), for Re(μ+ν) > 1.
pub fn cauchy_beta(mu: Complex64, nu: Complex64) -> Result<Complex64> {
    if (mu + nu).re <= 1.0 {
        return Err(Error::domain("Cauchy beta needs Re(μ+ν) > 1"));
    }
    Ok(GammaProduct::one()
        .pow(2.0, 2.0 - mu - nu)
        .times(PI)
        .gamma(mu + nu - 1.0)?
        .inv_gamma(mu)?
        .inv_gamma(nu)?
        .value())
}

/// Γ(α)Γ(σ-α)/Γ(σ), for Re α > 0 and Re(σ-α) > 0.
pub fn beta_halfline(alpha: Complex64, sigma: Complex64) -> Result<Complex64> {
    if alpha.re <= 0.0 || (sigma - alpha).re <= 0.0 {
        return Err(Error::domain("half-line beta needs Re α > 0 and Re(σ-α) > 0"));
    }
    Ok(GammaProduct::one()
        .gamma(alpha)?
        .gamma(sigma - alpha)?
        .inv_gamma(sigma)?
        .value())
}

/// π 2^{-μ} Γ(1+μ) e^{iπν/2} / (Γ(1+(μ+ν)/2) Γ(1+(μ-ν)/2)), for Re μ > -1.
pub fn lobachevsky(mu: Complex64, nu: Complex64) -> Result<Complex64> {
    if mu.re <= -1.0 {
        return Err(Error::domain("sine-power integral needs Re μ > -1"));
    }
    Ok(GammaProduct::one()
        .times(PI)
        .pow(2.0, -mu)
        .gamma(1.0 + mu)?
        .inv_gamma(1.0 + (mu + nu) / 2.0)?
        .inv_gamma(1.0 + (mu - nu) / 2.0)?
        .exp_times(Complex64::i() * PI * nu / 2.0)
        .value())
}

/// ∏_{k<l} Γ(a_k+a_l) / Γ(a_1+a_2+a_3+a_4), for Re a_k > 0.
pub fn wilson(a: [Complex64; 4]) -> Result<Complex64> {
    if a.iter().any(|x| x.re <= 0.0) {
        return Err(Error::domain("Wilson integral needs Re a_k > 0"));
    }
    let mut p = GammaProduct::one();
    for k in 0..4 {
        for l in (k + 1)..4 {
            p = p.gamma(a[k] + a[l])?;
        }
    }
    Ok(p.inv_gamma(a.iter().sum::<Complex64>())?.value())
}

/// Right-hand side of a one-dimensional identity from a parameter map with
/// real entries.
pub fn scalar_closed_form(identity: ScalarIdentity, params: &ParamMap) -> Result<Complex64> {
    match identity {
        ScalarIdentity::Euler => euler_beta(c(params.real("alpha")?), c(params.real("beta")?)),
        ScalarIdentity::Cauchy => cauchy_beta(c(params.real("mu")?), c(params.real("nu")?)),
        ScalarIdentity::Beta3 => {
            beta_halfline(c(params.real("alpha")?), c(params.real("sigma")?))
        }
        ScalarIdentity::Lobachevsky => {
            lobachevsky(c(params.real("mu")?), c(params.real("nu")?))
        }
        ScalarIdentity::Wilson => {
            let a = params.seq_len("a", 4)?;
            wilson([c(a[0]), c(a[1]), c(a[2]), c(a[3])])
        }
    }
}

/// Versions of the Selberg integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelbergVariant {
    /// ∫_{[0,1]^n} ∏ t^{α-1}(1-t)^{β-1} |Δ(t)|^{2γ} dt
    UnitBox,
    /// ∫_{(0,∞)^n} ∏ x^{α-1}(1+x)^{-α-β-2γ(n-1)} |Δ(x)|^{2γ} dx
    Halfline,
    /// (2π)^{-n} ∫_{R^n} ∏ (1-ix)^{-α}(1+ix)^{-β} |Δ(x)|^{2γ} dx
    Cauchy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelbergParams {
    pub n: usize,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: f64,
}

impl SelbergParams {
    pub fn real(n: usize, alpha: f64, beta: f64, gamma: f64) -> Self {
        Self {
            n,
            alpha: c(alpha),
            beta: c(beta),
            gamma,
        }
    }
}

impl SelbergVariant {
    /// Convergence region of the integral.
    pub fn validate(self, p: &SelbergParams) -> Result<()> {
        if p.n == 0 {
            return Err(Error::domain("Selberg integral needs n ≥ 1"));
        }
        if !(p.gamma >= 0.0) || !p.gamma.is_finite() {
            return Err(Error::domain("Selberg integral needs γ ≥ 0"));
        }
        let n = p.n as f64;
        let (a, b, g) = (p.alpha.re, p.beta.re, p.gamma);
        match self {
            SelbergVariant::UnitBox | SelbergVariant::Halfline => {
                if a <= 0.0 || b <= 0.0 {
                    return Err(Error::domain("Selberg integral needs Re α > 0 and Re β > 0"));
                }
            }
            SelbergVariant::Cauchy => {
                // Each Γ in the numerator and denominator must be finite and
                // positive in real part; the binding constraints are the ones
                // at j = n.
                if a + b - 2.0 * (n - 1.0) * g - 1.0 <= 0.0 {
                    return Err(Error::domain(
                        "Cauchy-type Selberg integral needs Re(α+β) > 1 + 2γ(n-1)",
                    ));
                }
                if a - (n - 1.0) * g <= 0.0 || b - (n - 1.0) * g <= 0.0 {
                    return Err(Error::domain(
                        "Cauchy-type Selberg integral needs Re α, Re β > γ(n-1)",
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Right-hand side of a Selberg-type identity.
pub fn selberg_closed_form(variant: SelbergVariant, p: &SelbergParams) -> Result<Complex64> {
    variant.validate(p)?;
    let n = p.n;
    let g = p.gamma;
    let mut prod = GammaProduct::one();
    match variant {
        SelbergVariant::UnitBox | SelbergVariant::Halfline => {
            for j in 0..n {
                let jg = j as f64 * g;
                prod = prod
                    .gamma(p.alpha + jg)?
                    .gamma(p.beta + jg)?
                    .gamma(1.0 + (j + 1) as f64 * g)?
                    .inv_gamma(p.alpha + p.beta + (n + j - 1) as f64 * g)?
                    .inv_gamma(1.0 + g)?;
            }
        }
        SelbergVariant::Cauchy => {
            let nf = n as f64;
            prod = prod.pow(2.0, -(p.alpha + p.beta) * nf + g * nf * (nf - 1.0) + nf);
            for j in 1..=n {
                let jf = j as f64;
                prod = prod
                    .gamma(p.alpha + p.beta - (nf + jf - 2.0) * g - 1.0)?
                    .gamma(1.0 + jf * g)?
                    .inv_gamma(p.alpha - (jf - 1.0) * g)?
                    .inv_gamma(p.beta - (jf - 1.0) * g)?
                    .inv_gamma(1.0 + g)?;
            }
        }
    }
    Ok(prod.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(z: Complex64) -> f64 {
        assert!(z.im.abs() < 1e-14 * z.re.abs().max(1.0));
        z.re
    }

    #[test]
    fn euler_example() {
        assert!((r(euler_beta(c(2.0), c(3.0)).unwrap()) - 1.0 / 12.0).abs() < 1e-14 / 12.0);
    }

    #[test]
    fn cauchy_example() {
        assert!((r(cauchy_beta(c(1.0), c(1.0)).unwrap()) - PI).abs() < 1e-13);
        assert!(cauchy_beta(c(0.5), c(0.5)).is_err());
    }

    #[test]
    fn beta3_example() {
        // ∫ x/(1+x)^5 dx = Γ(2)Γ(3)/Γ(5) = 1/12
        assert!((r(beta_halfline(c(2.0), c(5.0)).unwrap()) - 1.0 / 12.0).abs() < 1e-14 / 12.0);
    }

    #[test]
    fn lobachevsky_examples() {
        // ∫_0^π sin t dt = 2
        assert!((r(lobachevsky(c(1.0), c(0.0)).unwrap()) - 2.0).abs() < 1e-13);
        // ∫_0^π e^{2it} dt = 0
        assert_eq!(lobachevsky(c(0.0), c(2.0)).unwrap(), Complex64::new(0.0, 0.0));
        // ∫_0^π e^{it} dt = 2i
        let v = lobachevsky(c(0.0), c(1.0)).unwrap();
        assert!((v - Complex64::new(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn wilson_all_ones() {
        let v = r(wilson([c(1.0); 4]).unwrap());
        assert!((v - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn selberg_n1_matches_euler() {
        let p = SelbergParams::real(1, 2.0, 3.0, 0.7);
        let s = selberg_closed_form(SelbergVariant::UnitBox, &p).unwrap();
        assert!((r(s) - 1.0 / 12.0).abs() < 1e-14 / 12.0);
    }

    #[test]
    fn selberg_cauchy_n1_is_cauchy_over_2pi() {
        let p = SelbergParams::real(1, 2.5, 1.5, 0.0);
        let s = r(selberg_closed_form(SelbergVariant::Cauchy, &p).unwrap());
        let e = r(cauchy_beta(c(2.5), c(1.5)).unwrap());
        assert!((2.0 * PI * s - e).abs() < 1e-14 * e);
    }

    #[test]
    fn selberg_known_value() {
        // n=2, α=β=γ=1: ∫∫ (t1-t2)^2 = 1/6 on the unit square.
        let p = SelbergParams::real(2, 1.0, 1.0, 1.0);
        let s = r(selberg_closed_form(SelbergVariant::UnitBox, &p).unwrap());
        assert!((s - 1.0 / 6.0).abs() < 1e-13);
    }

    #[test]
    fn selberg_domain() {
        let p = SelbergParams::real(2, -1.0, 1.0, 1.0);
        assert!(selberg_closed_form(SelbergVariant::UnitBox, &p).is_err());
        let p = SelbergParams::real(3, 1.5, 1.5, 1.0);
        assert!(selberg_closed_form(SelbergVariant::Cauchy, &p).is_err());
    }
}
