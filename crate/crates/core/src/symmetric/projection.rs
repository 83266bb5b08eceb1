//! Integrating out the last row and column of a symmetric matrix under
//! det(1+T²)^{-α}.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::algebra::{hermitian_coords, Field, MatK};
use crate::error::{Error, Result};
use crate::integrate::{mc_integrate, CauchyProduct, Engine, LhsEstimate, SignedLn, VerdictRule, VerificationReport};
use crate::params::ParamMap;
use crate::special::GammaProduct;
use crate::symmetric::hua::ln_det_one_plus_i;

/// Note attached to projection reports.
pub const PROJECTION_NOTE: &str = "projection constant: published form 2^{(n-1)/2}π^{n/2}Γ(2α+(n+1)/2)Γ(α-1/2)/(Γ(α)Γ(2α-1)) \
     fails at n=1; using π^{n/2}Γ(α-1/2)Γ(2α-(n+1)/2)/(Γ(α)Γ(2α-1))";

fn check(n: usize, alpha: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("projection needs n ≥ 2, got {n}")));
    }
    if !(alpha > 0.5 * n as f64) {
        return Err(Error::domain(format!(
            "projection identity at n={n} needs α > {}",
            0.5 * n as f64
        )));
    }
    Ok(())
}

/// The constant c with ∫_{Symm_n} f([T]_{n-1}) det(1+T²)^{-α} dT
/// = c ∫_{Symm_{n-1}} f(S) det(1+S²)^{1/2-α} dS.
pub fn projection_constant(n: usize, alpha: f64) -> Result<f64> {
    check(n, alpha)?;
    let nf = n as f64;
    Ok(GammaProduct::one()
        .pow(PI, nf / 2.0)
        .gamma(alpha - 0.5)?
        .gamma(2.0 * alpha - (nf + 1.0) / 2.0)?
        .inv_gamma(alpha)?
        .inv_gamma(2.0 * alpha - 1.0)?
        .real())
}

/// The constant in its published form, kept for reports.
pub fn projection_constant_published(n: usize, alpha: f64) -> Result<f64> {
    check(n, alpha)?;
    let nf = n as f64;
    Ok(GammaProduct::one()
        .pow(2.0, (nf - 1.0) / 2.0)
        .pow(PI, nf / 2.0)
        .gamma(2.0 * alpha + (nf + 1.0) / 2.0)?
        .gamma(alpha - 0.5)?
        .inv_gamma(alpha)?
        .inv_gamma(2.0 * alpha - 1.0)?
        .real())
}

/// Bounded test functions of the corner S = [T]_{n-1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProjectionTest {
    /// f = 1
    One,
    /// det(1+S²)^{-1}
    Lorentz,
    /// tr S / (1 + (tr S)⁴), odd under S ↦ -S
    Odd,
    /// det(1+(S-1)²)^{-1}
    Shifted,
}

impl ProjectionTest {
    pub const ALL: [ProjectionTest; 4] =
        [ProjectionTest::One, ProjectionTest::Lorentz, ProjectionTest::Odd, ProjectionTest::Shifted];

    pub fn name(self) -> &'static str {
        match self {
            ProjectionTest::One => "one",
            ProjectionTest::Lorentz => "lorentz",
            ProjectionTest::Odd => "odd",
            ProjectionTest::Shifted => "shifted",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown test function `{s}` (one, lorentz, odd, shifted)")))
    }

    fn eval(self, s: &MatK) -> SignedLn {
        match self {
            ProjectionTest::One => SignedLn::positive(0.0),
            ProjectionTest::Lorentz => SignedLn::positive(-2.0 * ln_det_one_plus_i(s).re),
            ProjectionTest::Odd => {
                let tr: f64 = (0..s.rows()).map(|i| s.get(i, i).w).sum();
                SignedLn::from_value(tr / (1.0 + tr.powi(4)))
            }
            ProjectionTest::Shifted => {
                let shifted = s - &MatK::identity(s.field(), s.rows());
                SignedLn::positive(-2.0 * ln_det_one_plus_i(&shifted).re)
            }
        }
    }
}

/// Monte Carlo estimates of both sides of the projection identity; the
/// right-hand side is the constant times an estimate over Symm_{n-1}.
pub fn projection_identity_check(
    n: usize,
    alpha: f64,
    f: ProjectionTest,
    samples: u64,
    seed: u64,
    rule: &VerdictRule,
) -> Result<VerificationReport> {
    let c = projection_constant(n, alpha)?;
    let full = move |x: &[f64]| {
        let t = hermitian_coords::to_matrix(Field::R, n, x);
        let mut v = f.eval(&t.corner(n - 1, n - 1).expect("corner within bounds"));
        if v.sign != 0.0 {
            v.ln_abs -= 2.0 * alpha * ln_det_one_plus_i(&t).re;
        }
        v
    };
    let lhs = mc_integrate(full, &CauchyProduct::uniform(hermitian_coords::dim(Field::R, n), 1.0), samples, seed)?;
    let corner = move |x: &[f64]| {
        let s = hermitian_coords::to_matrix(Field::R, n - 1, x);
        let mut v = f.eval(&s);
        if v.sign != 0.0 {
            v.ln_abs += (1.0 - 2.0 * alpha) * ln_det_one_plus_i(&s).re;
        }
        v
    };
    let reduced = mc_integrate(
        corner,
        &CauchyProduct::uniform(hermitian_coords::dim(Field::R, n - 1), 1.0),
        samples,
        seed.wrapping_add(1),
    )?
    .scaled(c);
    let sigma = lhs.stderr.hypot(reduced.stderr);
    let (z, verdict) = rule.mc(lhs.mean, reduced.mean, sigma);
    let mut est = LhsEstimate::from_mc(&lhs);
    est.engine = Engine::MonteCarlo;
    Ok(VerificationReport {
        identity: "projection".into(),
        params: ParamMap::new()
            .with_real("n", n as f64)
            .with_real("alpha", alpha)
            .with_text("f", f.name()),
        lhs: est,
        rhs: reduced.mean,
        rhs_im: None,
        rhs_stderr: Some(reduced.stderr),
        z,
        verdict,
        notes: vec![
            PROJECTION_NOTE.to_string(),
            format!("published constant evaluates to {:.10e}, used constant {:.10e}", projection_constant_published(n, alpha)?, c),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetric::hua::hua_symm_rhs;
    use num_complex::Complex64;

    #[test]
    fn constant_reproduces_hua_recursively() {
        // With f = 1 the identity maps the n-level Hua integral at α to the
        // (n-1)-level one at α - 1/2.
        for n in 2..=5 {
            for a in [1.6 + n as f64 / 2.0, 3.7 + n as f64 / 2.0] {
                let full = hua_symm_rhs(n, Complex64::new(a, 0.0), Complex64::new(a, 0.0)).unwrap();
                let b = Complex64::new(a - 0.5, 0.0);
                let lower = hua_symm_rhs(n - 1, b, b).unwrap();
                let c = projection_constant(n, a).unwrap();
                assert!((full - c * lower).abs() < 1e-11 * full, "n={n} α={a}");
            }
        }
    }

    #[test]
    fn published_constant_differs() {
        let a = projection_constant(2, 2.0).unwrap();
        let b = projection_constant_published(2, 2.0).unwrap();
        assert!((a - b).abs() > 0.1 * a);
    }

    #[test]
    fn domain() {
        assert!(projection_constant(2, 1.0).is_err());
        assert!(projection_constant(1, 3.0).is_err());
        assert!(ProjectionTest::from_name("cosine").is_err());
    }
}
