use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::algebra::{hermitian_coords, hermitian_eigenvalues, Field, MatK};
use crate::error::{Error, Result};
use crate::integrate::{
    chunk_rng, mc_integrate, CauchyProduct, InterlacingSequential, MCEstimate,
    Proposal, SignedLn,
};
use crate::rayleigh::table::{RayleighTable, ThetaTable};
use crate::special::{ln_gamma_real, GammaProduct};

/// Note on the power of two in the dimension-interpolated right-hand side.
pub const RAYLEIGH_NOTE: &str =
    "factor 2^{2n-Σ(σ_j+τ_j)} included; the published form omits it, the θ-family carries it";

/// ln C_n(d) = ln π^{n(n-1)d/4} - (n(n-1)/2) ln Γ(d/2).
pub fn ln_rayleigh_constant(n: usize, d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::domain(format!("d must be positive, got {d}")));
    }
    let pairs = (n * n.saturating_sub(1) / 2) as f64;
    Ok(0.5 * pairs * d * PI.ln() - pairs * ln_gamma_real(0.5 * d)?.re)
}

fn ln_diff(a: f64, b: f64) -> Result<f64> {
    let w = (a - b).abs();
    if w == 0.0 {
        Err(Error::Singular(format!("tie at {a} in a Rayleigh table")))
    } else {
        Ok(w.ln())
    }
}

fn ln_vandermonde(row: &[f64]) -> Result<f64> {
    let mut l = 0.0;
    for q in 1..row.len() {
        for p in 0..q {
            l += ln_diff(row[q], row[p])?;
        }
    }
    Ok(l)
}

/// Log of the θ-weighted table measure without constant:
/// ∏_j ∏_{α,p} |λ_{jα}-λ_{j+1,p}|^{θ_{jα}-1} / ∏_{α<β}(λ_{jβ}-λ_{jα})^{θ_{jα}+θ_{jβ}-2}
/// times the Vandermonde of row n.
pub fn theta_log_measure(t: &RayleighTable, theta: &ThetaTable) -> Result<f64> {
    let n = t.n();
    if theta.n() != n {
        return Err(Error::InvalidParameter(format!(
            "θ is sized for n = {}, table has n = {n}",
            theta.n()
        )));
    }
    let mut l = ln_vandermonde(t.row(n))?;
    for j in 1..n {
        let (row, next) = (t.row(j), t.row(j + 1));
        for a in 0..j {
            let th = theta.get(j, a + 1);
            if th != 1.0 {
                for &v in next {
                    l += (th - 1.0) * ln_diff(row[a], v)?;
                }
            }
            for b in (a + 1)..j {
                let e = th + theta.get(j, b + 1) - 2.0;
                if e != 0.0 {
                    l -= e * ln_diff(row[b], row[a])?;
                }
            }
        }
    }
    Ok(l)
}

/// Log of the pushforward of Lebesgue measure on Herm_n(K) to tables,
/// continued to real d > 0.
pub fn rayleigh_log_density(t: &RayleighTable, d: f64) -> Result<f64> {
    let theta = ThetaTable::constant(t.n(), 0.5 * d)?;
    Ok(ln_rayleigh_constant(t.n(), d)? + theta_log_measure(t, &theta)?)
}

/// At d = 2 only the constant and the Vandermonde of row n survive.
pub fn rayleigh_log_density_d2(t: &RayleighTable) -> Result<f64> {
    Ok(ln_rayleigh_constant(t.n(), 2.0)? + ln_vandermonde(t.row(t.n()))?)
}

fn check_sequences(n: usize, sigma: &[f64], tau: &[f64]) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if sigma.len() != n || tau.len() != n {
        return Err(Error::InvalidParameter(format!(
            "`σ` and `τ` must have n = {n} entries (got {} and {})",
            sigma.len(),
            tau.len()
        )));
    }
    Ok(())
}

/// π^n 2^{2n-Σ(σ+τ)} ∏ Γ(θ_{jα}) ∏_j Γ(σ_j+τ_j-1-Σ_α θ_{j-1,α}) / (Γ(σ_j)Γ(τ_j)).
pub fn theta_beta_rhs(n: usize, sigma: &[f64], tau: &[f64], theta: &ThetaTable) -> Result<f64> {
    check_sequences(n, sigma, tau)?;
    if theta.n() != n {
        return Err(Error::InvalidParameter(format!("θ is sized for n = {}", theta.n())));
    }
    let total: f64 = sigma.iter().chain(tau).sum();
    let mut g = GammaProduct::one().pow(PI, n as f64).pow(2.0, 2.0 * n as f64 - total);
    for &th in theta.values() {
        g = g.gamma(th)?;
    }
    for j in 1..=n {
        let arg = sigma[j - 1] + tau[j - 1] - 1.0 - theta.row_sum(j - 1);
        if !(arg > 0.0) {
            return Err(Error::domain(format!(
                "σ_{j} + τ_{j} - 1 - Σθ_{{{}α}} = {arg} must be positive",
                j - 1
            )));
        }
        for (name, v) in [("σ", sigma[j - 1]), ("τ", tau[j - 1])] {
            if !(v > 0.0) {
                return Err(Error::domain(format!("{name}_{j} = {v} must be positive")));
            }
        }
        g = g.gamma(arg)?.inv_gamma(sigma[j - 1])?.inv_gamma(tau[j - 1])?;
    }
    Ok(g.real())
}

/// π^{n(n-1)d/4+n} 2^{2n-Σ(σ+τ)} ∏_j Γ(σ_j+τ_j-1-(j-1)d/2) / (Γ(σ_j)Γ(τ_j)).
pub fn interp_beta_rhs(n: usize, sigma: &[f64], tau: &[f64], d: f64) -> Result<f64> {
    let theta = ThetaTable::constant(n.max(1), 0.5 * d)?;
    let c = ln_rayleigh_constant(n, d)?;
    Ok(theta_beta_rhs(n, sigma, tau, &theta)? * c.exp())
}

/// The same product without the power of two.
pub fn interp_beta_rhs_published(n: usize, sigma: &[f64], tau: &[f64], d: f64) -> Result<f64> {
    let total: f64 = sigma.iter().chain(tau).sum();
    Ok(interp_beta_rhs(n, sigma, tau, d)? * ((total - 2.0 * n as f64) * LN_2).exp())
}

fn telescoped(v: &[f64], j: usize) -> f64 {
    v[j] - v.get(j + 1).copied().unwrap_or(0.0)
}

/// Logarithm of ∏ (1+iλ)^{-a}(1-iλ)^{-b} over a set of real λ.
fn ln_cauchy_factors(values: &[f64], a: f64, b: f64) -> Complex64 {
    values
        .iter()
        .map(|&v| {
            let l = Complex64::new(1.0, v).ln();
            -a * l - b * l.conj()
        })
        .sum()
}

/// θ-family integrand on flattened tables, measure included.
pub fn theta_integrand(
    sigma: Vec<f64>,
    tau: Vec<f64>,
    theta: ThetaTable,
) -> impl Fn(&[f64]) -> SignedLn + Sync {
    let n = theta.n();
    move |x: &[f64]| {
        let Ok(t) = RayleighTable::from_flat(n, x.to_vec()) else {
            return SignedLn::ZERO;
        };
        let Ok(measure) = theta_log_measure(&t, &theta) else {
            return SignedLn::ZERO;
        };
        let mut l = ln_cauchy_factors(t.row(n), sigma[n - 1], tau[n - 1]) + measure;
        for j in 1..n {
            for a in 1..=j {
                let th = theta.get(j, a);
                l += ln_cauchy_factors(&[t.get(j, a)], telescoped(&sigma, j - 1) + th, telescoped(&tau, j - 1) + th);
            }
        }
        SignedLn::re_exp(l)
    }
}

/// The dimension-interpolated integrand, C_n(d) included.
pub fn interp_integrand(sigma: Vec<f64>, tau: Vec<f64>, d: f64) -> Result<impl Fn(&[f64]) -> SignedLn + Sync> {
    let n = sigma.len();
    let c = ln_rayleigh_constant(n, d)?;
    let f = theta_integrand(sigma, tau, ThetaTable::constant(n, 0.5 * d)?);
    Ok(move |x: &[f64]| {
        let v = f(x);
        SignedLn { ln_abs: v.ln_abs + c, ..v }
    })
}

/// ∏_{k<n} det(1+i[X]_k)^{-σ_k+σ_{k+1}-d/2} det(1-i[X]_k)^{-τ_k+τ_{k+1}-d/2}
/// · det(1+iX)^{-σ_n} det(1-iX)^{-τ_n} on Herm_n(K) coordinates.
pub fn matrix_integrand(field: Field, sigma: Vec<f64>, tau: Vec<f64>) -> impl Fn(&[f64]) -> SignedLn + Sync {
    let n = sigma.len();
    let h = 0.5 * field.d();
    move |x: &[f64]| {
        let m = hermitian_coords::to_matrix(field, n, x);
        let mut l = Complex64::new(0.0, 0.0);
        for k in 1..=n {
            let corner: MatK = m.corner(k, k).expect("in range");
            let Ok(ev) = hermitian_eigenvalues(&corner) else {
                return SignedLn::ZERO;
            };
            let extra = if k < n { h } else { 0.0 };
            l += ln_cauchy_factors(&ev, telescoped(&sigma, k - 1) + extra, telescoped(&tau, k - 1) + extra);
        }
        SignedLn::re_exp(l)
    }
}

/// Table sampler; the interior Beta parameters follow κ so that small θ
/// exponents stay integrable against the proposal.
pub fn table_proposal(n: usize, kappa: &ThetaTable) -> Result<InterlacingSequential> {
    let k = if n == 1 { vec![1.0] } else { kappa.values().to_vec() };
    InterlacingSequential::new(n, 1.0, k)
}

/// One table drawn with uniform interior entries, and its log proposal density.
pub fn sample_table_proposal(n: usize, seed: u64) -> Result<(RayleighTable, f64)> {
    let p = InterlacingSequential::uniform(n, 1.0)?;
    let mut rng = chunk_rng(seed, 0);
    let mut x = vec![0.0; p.dim()];
    loop {
        if let Some(l) = p.draw(&mut rng, &mut x) {
            return Ok((RayleighTable::from_flat(n, x)?, l));
        }
    }
}

pub fn theta_beta_mc(sigma: &[f64], tau: &[f64], theta: &ThetaTable, samples: u64, seed: u64) -> Result<MCEstimate> {
    let n = theta.n();
    theta_beta_rhs(n, sigma, tau, theta)?;
    let p = table_proposal(n, theta)?;
    mc_integrate(theta_integrand(sigma.to_vec(), tau.to_vec(), theta.clone()), &p, samples, seed)
}

pub fn interp_beta_mc(sigma: &[f64], tau: &[f64], d: f64, samples: u64, seed: u64) -> Result<MCEstimate> {
    let n = sigma.len();
    interp_beta_rhs(n, sigma, tau, d)?;
    let kappa = ThetaTable::constant(n, 0.5 * d)?;
    let p = table_proposal(n, &kappa)?;
    mc_integrate(interp_integrand(sigma.to_vec(), tau.to_vec(), d)?, &p, samples, seed)
}

/// The matrix integral over Herm_n(K) with a Cauchy product proposal.
pub fn matrix_beta_mc(field: Field, sigma: &[f64], tau: &[f64], samples: u64, seed: u64) -> Result<MCEstimate> {
    let n = sigma.len();
    interp_beta_rhs(n, sigma, tau, field.d())?;
    let dim = hermitian_coords::dim(field, n);
    let scales = (0..dim).map(|k| if k < n { 1.0 } else { 0.7 }).collect();
    mc_integrate(matrix_integrand(field, sigma.to_vec(), tau.to_vec()), &CauchyProduct::new(scales), samples, seed)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::cauchy_beta;
    use rand::{Rng, SeedableRng};

    #[test]
    fn n1_density_is_flat() {
        let t = RayleighTable::from_rows(&[vec![0.4]]).unwrap();
        assert_eq!(rayleigh_log_density(&t, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn d2_cancellation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = rng.random_range(1..=4);
            let (t, _) = sample_table_proposal(n, rng.random()).unwrap();
            let a = rayleigh_log_density(&t, 2.0).unwrap();
            let b = rayleigh_log_density_d2(&t).unwrap();
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn n1_is_cauchy_beta() {
        for (s, t) in [(2.0, 3.0), (1.3, 0.9), (4.0, 4.0)] {
            let e = cauchy_beta(s.into(), t.into()).unwrap().re;
            for d in [1.0, 2.0, 4.0] {
                let v = interp_beta_rhs(1, &[s], &[t], d).unwrap();
                assert!((v - e).abs() < 1e-13 * e);
            }
        }
    }

    #[test]
    fn theta_specialization() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let n = rng.random_range(1..=4);
            let d = rng.random_range(0.5..4.0);
            let sigma: Vec<f64> = (0..n).map(|_| rng.random_range(2.0..6.0) + n as f64 * d).collect();
            let tau: Vec<f64> = (0..n).map(|_| rng.random_range(2.0..6.0) + n as f64 * d).collect();
            let th = ThetaTable::constant(n, 0.5 * d).unwrap();
            let lhs = interp_beta_rhs(n, &sigma, &tau, d).unwrap();
            let direct = {
                let total: f64 = sigma.iter().chain(&tau).sum();
                let mut g = GammaProduct::one()
                    .pow(PI, (n * (n - 1)) as f64 * d / 4.0 + n as f64)
                    .pow(2.0, 2.0 * n as f64 - total);
                for j in 1..=n {
                    g = g
                        .gamma(sigma[j - 1] + tau[j - 1] - 1.0 - (j - 1) as f64 * d / 2.0)
                        .unwrap()
                        .inv_gamma(sigma[j - 1])
                        .unwrap()
                        .inv_gamma(tau[j - 1])
                        .unwrap();
                }
                g.real()
            };
            assert!((lhs - direct).abs() < 1e-10 * direct);
            let via_theta = theta_beta_rhs(n, &sigma, &tau, &th).unwrap() * ln_rayleigh_constant(n, d).unwrap().exp();
            assert!((via_theta - direct).abs() < 1e-10 * direct);
        }
    }

    #[test]
    fn published_form_drops_power_of_two() {
        let a = interp_beta_rhs(2, &[4.0, 3.0], &[4.0, 3.0], 1.0).unwrap();
        let b = interp_beta_rhs_published(2, &[4.0, 3.0], &[4.0, 3.0], 1.0).unwrap();
        assert!((b / a - 2f64.powi(10)).abs() < 1e-9);
    }

    #[test]
    fn ties_are_singular() {
        let t = RayleighTable::from_rows(&[vec![1.0], vec![1.0, 2.0]]).unwrap();
        assert!(matches!(rayleigh_log_density(&t, 1.0), Err(Error::Singular(_))));
    }

    #[test]
    fn proposal_tables_interlace() {
        for seed in 0..2000 {
            let (t, l) = sample_table_proposal(3, seed).unwrap();
            assert!(l.is_finite());
            assert_eq!(t.flat().len(), 6);
        }
    }
}
