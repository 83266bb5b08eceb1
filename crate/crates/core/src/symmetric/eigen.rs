//! Pushforward of Lebesgue measure on Hermitian matrices to spectra, and the
//! singular-value density of rectangular matrices.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::algebra::{hermitian_coords, hermitian_eigenvalues, Field};
use crate::error::{Error, Result};
use crate::integrate::{
    mc_integrate, quad_adaptive, CauchyProduct, IteratedRegion, MCEstimate, QuadOptions, SignedLn,
};
use crate::special::ln_gamma_real;

fn lg(x: f64) -> Result<f64> {
    Ok(ln_gamma_real(x)?.re)
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// ln ∫_{Herm_n(K)} exp(-tr X²) dX. Diagonal entries contribute √π each,
/// every real component above the diagonal √(π/2).
fn ln_gaussian_matrix_side(field: Field, n: usize) -> f64 {
    let off = (field.dim() * n * (n - 1) / 2) as f64;
    0.5 * n as f64 * PI.ln() + 0.5 * off * (0.5 * PI).ln()
}

/// ln ∫_{λ1≥…≥λn} exp(-Σλ²) ∏|λ_k-λ_l|^{2γ} dλ, from Mehta's integral.
fn ln_gaussian_eigen_side(gamma_: f64, n: usize) -> Result<f64> {
    let nf = n as f64;
    let mut l = 0.5 * nf * PI.ln() - gamma_ * nf * (nf - 1.0) * 0.5 * std::f64::consts::LN_2;
    for j in 1..=n {
        l += lg(1.0 + j as f64 * gamma_)? - lg(1.0 + gamma_)?;
    }
    Ok(l - ln_factorial(n))
}

/// ln C_n from the Laguerre pair ∫_{Pos_n} e^{-tr X} det X^a dX and its
/// eigenvalue form.
fn ln_constant_laguerre(field: Field, n: usize, a: f64) -> Result<f64> {
    let d = field.d();
    let g = 0.5 * d;
    let kappa = 0.5 * d * (n as f64 - 1.0) + 1.0;
    let mut matrix = 0.25 * (n * (n - 1)) as f64 * d * PI.ln();
    let mut eigen = -ln_factorial(n);
    for k in 0..n {
        let kf = k as f64;
        matrix += lg(a + kappa - kf * g)?;
        eigen += lg(a + 1.0 + kf * g)? + lg(1.0 + (kf + 1.0) * g)? - lg(1.0 + g)?;
    }
    Ok(matrix - eigen)
}

/// ln of the Gaussian eigenvalue-side integral by quadrature over the wedge.
fn ln_gaussian_eigen_quadrature(d: f64, n: usize) -> Result<f64> {
    let f = |x: &[f64]| {
        let mut l = -x.iter().map(|v| v * v).sum::<f64>();
        for k in 0..x.len() {
            for m in (k + 1)..x.len() {
                l += d * (x[k] - x[m]).abs().ln();
            }
        }
        l.exp()
    };
    let region = IteratedRegion::new(n, |level: usize, outer: &[f64]| {
        if level == 0 {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else {
            (f64::NEG_INFINITY, outer[level - 1])
        }
    });
    let r = quad_adaptive(&f, &region, &QuadOptions::default().with_rel_tol(1e-11))?;
    Ok(r.value.ln())
}

/// The constant C_n(K) in ∫_{Herm_n(K)} F dX = C_n ∫_{λ1≥…≥λn} f ∏|λ_k-λ_l|^d dλ.
///
/// Calibrated on F = exp(-tr X²), whose matrix side is an elementary
/// Gaussian integral and whose eigenvalue side is Mehta's integral. The value
/// is cross-checked against the Laguerre pair (all n) and against quadrature
/// of the eigenvalue side (n ≤ 2); a relative dispersion above 1e-6 is an
/// error.
pub fn eigen_reduction_constant(field: Field, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("matrix size must be at least 1".into()));
    }
    let g = 0.5 * field.d();
    let ln_c = ln_gaussian_matrix_side(field, n) - ln_gaussian_eigen_side(g, n)?;
    let mut checks = vec![ln_constant_laguerre(field, n, 0.5)?];
    if n <= 2 {
        checks.push(ln_gaussian_matrix_side(field, n) - ln_gaussian_eigen_quadrature(field.d(), n)?);
    }
    let dispersion = checks
        .iter()
        .map(|l| (l - ln_c).exp_m1().abs())
        .fold(0.0, f64::max);
    if dispersion > 1e-6 {
        return Err(Error::Calibration { dispersion, limit: 1e-6 });
    }
    Ok(ln_c.exp())
}

/// Eigenvalue-coordinate integrand C_n f(λ) ∏|λ_k-λ_l|^d, zero off the wedge
/// λ1 ≥ … ≥ λn. Integrating it over R^n gives ∫ F dX.
pub fn weyl_reduce<F>(f: F, field: Field, n: usize) -> Result<impl Fn(&[f64]) -> SignedLn + Sync>
where
    F: Fn(&[f64]) -> SignedLn + Sync,
{
    let ln_c = eigen_reduction_constant(field, n)?.ln();
    let d = field.d();
    Ok(move |lambda: &[f64]| {
        if lambda.windows(2).any(|w| w[0] < w[1]) {
            return SignedLn::ZERO;
        }
        let mut v = f(lambda);
        if v.sign == 0.0 {
            return v;
        }
        v.ln_abs += ln_c;
        for k in 0..lambda.len() {
            for l in (k + 1)..lambda.len() {
                v.ln_abs += d * (lambda[k] - lambda[l]).ln();
            }
        }
        v
    })
}

/// Unitarily invariant test integrands used to check the reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum RadialTest {
    /// exp(-Σλ²)
    Gaussian,
    /// ∏(1+λ²)^{-α}
    Hua { alpha: f64 },
    /// ∏(1+λ⁴)^{-1}
    Quartic,
}

impl RadialTest {
    pub const STANDARD: [RadialTest; 3] =
        [RadialTest::Gaussian, RadialTest::Hua { alpha: 2.0 }, RadialTest::Quartic];

    pub fn name(&self) -> String {
        match self {
            RadialTest::Gaussian => "gaussian".into(),
            RadialTest::Hua { alpha } => format!("hua(alpha={alpha})"),
            RadialTest::Quartic => "quartic".into(),
        }
    }

    pub fn ln_f(&self, lambda: &[f64]) -> f64 {
        match self {
            RadialTest::Gaussian => -lambda.iter().map(|v| v * v).sum::<f64>(),
            RadialTest::Hua { alpha } => -alpha * lambda.iter().map(|v| (v * v).ln_1p()).sum::<f64>(),
            RadialTest::Quartic => -lambda.iter().map(|v| v.powi(4).ln_1p()).sum::<f64>(),
        }
    }
}

/// Monte Carlo estimates of ∫ F over Herm_n(K) in matrix and in eigenvalue
/// coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualCoordinateCheck {
    pub matrix: MCEstimate,
    pub eigen: MCEstimate,
    /// (matrix - eigen) / combined standard error.
    pub z: f64,
}

pub fn dual_coordinate_check(
    field: Field,
    n: usize,
    test: RadialTest,
    samples: u64,
    seed: u64,
) -> Result<DualCoordinateCheck> {
    let dim = hermitian_coords::dim(field, n);
    let matrix_side = move |x: &[f64]| {
        let m = hermitian_coords::to_matrix(field, n, x);
        match hermitian_eigenvalues(&m) {
            Ok(ev) => SignedLn::positive(test.ln_f(&ev)),
            Err(_) => SignedLn::ZERO,
        }
    };
    let matrix = mc_integrate(matrix_side, &CauchyProduct::uniform(dim, 1.0), samples, seed)?;
    let eigen_side = weyl_reduce(move |ev: &[f64]| SignedLn::positive(test.ln_f(ev)), field, n)?;
    let eigen = mc_integrate(
        eigen_side,
        &CauchyProduct::uniform(n, 1.0),
        samples,
        seed.wrapping_add(0x9e37_79b9),
    )?;
    let sigma = matrix.stderr.hypot(eigen.stderr);
    Ok(DualCoordinateCheck {
        matrix,
        eigen,
        z: (matrix.mean - eigen.mean) / sigma,
    })
}

/// Unnormalized joint density of the singular values μ of an m×n matrix over
/// K (m ≤ n): ∏ μ_k^{d(n-m)+d-1} ∏_{k<l} |μ_k² - μ_l²|^d.
pub fn singular_value_density(field: Field, m: usize, n: usize, mu: &[f64]) -> Result<f64> {
    if m > n {
        return Err(Error::InvalidParameter(format!("need m ≤ n, got {m}×{n}")));
    }
    if mu.len() != m {
        return Err(Error::InvalidParameter(format!(
            "expected {m} singular values, got {}",
            mu.len()
        )));
    }
    if mu.iter().any(|&v| !(v >= 0.0)) {
        return Err(Error::domain("singular values must be non-negative"));
    }
    let d = field.d();
    let radial = d * (n - m) as f64 + d - 1.0;
    let mut v = mu.iter().map(|&x| x.powf(radial)).product::<f64>();
    for k in 0..m {
        for l in (k + 1)..m {
            v *= (mu[k] * mu[k] - mu[l] * mu[l]).abs().powf(d);
        }
    }
    Ok(v)
}

/// ln of the constant N with ∫_{Mat_{m,n}(K)} F dZ = N ∫_{μ∈[0,∞)^m, ordered}
/// f(μ) ρ(μ) dμ for singular-value functions F, with ρ the density above and
/// m ≤ n. Obtained by calibration on exp(-tr ZZ*).
pub fn ln_singular_value_constant(field: Field, m: usize, n: usize) -> Result<f64> {
    let d = field.d();
    let g = 0.5 * d;
    // Matrix side: π^{dmn/2}. Singular-value side, with x = μ²: 2^{-m} times
    // the Laguerre Selberg integral with α = d(n-m+1)/2, γ = d/2, divided by m!.
    let a = 0.5 * d * (n - m + 1) as f64;
    let mut eigen = -(m as f64) * std::f64::consts::LN_2 - ln_factorial(m);
    for j in 0..m {
        let jf = j as f64;
        eigen += lg(a + jf * g)? + lg(1.0 + (jf + 1.0) * g)? - lg(1.0 + g)?;
    }
    Ok(0.5 * d * (m * n) as f64 * PI.ln() - eigen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n1_constant_is_one() {
        for f in Field::ALL {
            assert!((eigen_reduction_constant(f, 1).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn known_constants() {
        assert!((eigen_reduction_constant(Field::R, 2).unwrap() - PI).abs() < 1e-10);
        assert!((eigen_reduction_constant(Field::C, 2).unwrap() - PI).abs() < 1e-10);
        assert!((eigen_reduction_constant(Field::R, 3).unwrap() - 19.739_208_802_178_716).abs() < 1e-9);
        assert!(eigen_reduction_constant(Field::H, 4).is_ok());
    }

    #[test]
    fn box_volume_n1() {
        let g = weyl_reduce(|_| SignedLn::positive(0.0), Field::R, 1).unwrap();
        assert!((g(&[0.3]).value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn off_wedge_is_zero() {
        let g = weyl_reduce(|_| SignedLn::positive(0.0), Field::C, 2).unwrap();
        assert_eq!(g(&[0.0, 1.0]).value(), 0.0);
        assert!((g(&[1.0, 0.0]).value() - PI).abs() < 1e-10);
    }

    #[test]
    fn singular_value_density_examples() {
        let v = singular_value_density(Field::C, 1, 2, &[0.7]).unwrap();
        assert!((v - 0.7f64.powi(3)).abs() < 1e-15);
        for f in Field::ALL {
            let v = singular_value_density(f, 1, 1, &[0.7]).unwrap();
            assert!((v - 0.7f64.powf(f.d() - 1.0)).abs() < 1e-15);
        }
        assert!(singular_value_density(Field::R, 3, 2, &[1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn singular_value_constant_disk() {
        // 1×1 complex: dZ = 2π μ dμ, density μ.
        let c = ln_singular_value_constant(Field::C, 1, 1).unwrap().exp();
        assert!((c - 2.0 * PI).abs() < 1e-12);
        // 1×1 real: the line folds onto μ ≥ 0 twice.
        let c = ln_singular_value_constant(Field::R, 1, 1).unwrap().exp();
        assert!((c - 2.0).abs() < 1e-12);
    }
}
