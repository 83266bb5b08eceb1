//! Beta integral over the Siegel wedge Z = T + iS, T > 0, S real symmetric.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{hermitian_coords, leading_minors_pd, Field};
use crate::error::{Error, Result};
use crate::integrate::{
    mc_integrate, quad_adaptive, CauchyProduct, DiagonalLaw, GammaCone, IteratedRegion, MCEstimate,
    OffDiagonalLaw, ProductProposal, Proposal, QuadOptions, QuadResult, SignedLn,
};
use crate::special::GammaProduct;

fn check_lengths(n: usize, seqs: &[(&str, &[f64])]) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    for (name, s) in seqs {
        if s.len() != n {
            return Err(Error::InvalidParameter(format!(
                "`{name}` has {} entries, expected {n}",
                s.len()
            )));
        }
    }
    Ok(())
}

fn positive_arg(what: String, x: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(x)
    } else {
        Err(Error::domain(format!("{what} = {x} must be positive")))
    }
}

/// ∏_k 2^{2-σ_k-τ_k+n-k} π^k Γ(λ_k-(n+k)/2) Γ(σ_k+τ_k-λ_k-(n-k)/2)
/// / (Γ(σ_k-(n-k)/2) Γ(τ_k-(n-k)/2)).
pub fn wedge_rhs(n: usize, lambda: &[f64], sigma: &[f64], tau: &[f64]) -> Result<f64> {
    check_lengths(n, &[("λ", lambda), ("σ", sigma), ("τ", tau)])?;
    let nf = n as f64;
    let mut g = GammaProduct::one();
    for k in 1..=n {
        let kf = k as f64;
        let (l, s, t) = (lambda[k - 1], sigma[k - 1], tau[k - 1]);
        let shift = 0.5 * (nf - kf);
        g = g
            .pow(2.0, 2.0 - s - t + nf - kf)
            .pow(PI, kf)
            .gamma(positive_arg(format!("λ_{k} - (n+{k})/2"), l - 0.5 * (nf + kf))?)?
            .gamma(positive_arg(format!("σ_{k} + τ_{k} - λ_{k} - (n-{k})/2"), s + t - l - shift)?)?
            .inv_gamma(positive_arg(format!("σ_{k} - (n-{k})/2"), s - shift)?)?
            .inv_gamma(positive_arg(format!("τ_{k} - (n-{k})/2"), t - shift)?)?;
    }
    Ok(g.real())
}

fn telescoped(v: &[f64], j: usize) -> f64 {
    v[j] - v.get(j + 1).copied().unwrap_or(0.0)
}

/// Logarithms of the leading principal minors of a matrix whose Hermitian
/// part is positive definite, on the branch continuous from the identity.
pub(crate) fn ln_corner_dets(a: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = a.nrows();
    let mut out = Vec::with_capacity(n);
    for j in 1..=n {
        let c = a.view((0, 0), (j, j)).into_owned();
        let l = match j {
            1 => c[(0, 0)].ln(),
            // eigenvalues lie in the right half-plane, so their arguments sum
            // to less than π in absolute value
            2 => (c[(0, 0)] * c[(1, 1)] - c[(0, 1)] * c[(1, 0)]).ln(),
            _ => {
                let (_, t) = c.schur().unpack();
                t.diagonal().iter().map(|z| z.ln()).sum()
            }
        };
        out.push(l);
    }
    out
}

/// Integrand on (T, S), each in `hermitian_coords` order over R.
pub fn wedge_integrand(
    lambda: Vec<f64>,
    sigma: Vec<f64>,
    tau: Vec<f64>,
) -> impl Fn(&[f64]) -> SignedLn + Sync {
    let n = lambda.len();
    let m = hermitian_coords::dim(Field::R, n);
    move |x: &[f64]| {
        let t = hermitian_coords::to_matrix(Field::R, n, &x[..m]);
        let Some(minors) = leading_minors_pd(&t) else {
            return SignedLn::ZERO;
        };
        let s = hermitian_coords::to_matrix(Field::R, n, &x[m..2 * m]);
        let z = DMatrix::from_fn(n, n, |i, j| {
            let one = if i == j { 1.0 } else { 0.0 };
            Complex64::new(one + t.get(i, j).w, s.get(i, j).w)
        });
        let logs = ln_corner_dets(&z);
        let mut l = Complex64::new(-(n as f64 + 1.0) * minors[n - 1].ln(), 0.0);
        for j in 0..n {
            l += telescoped(&lambda, j) * minors[j].ln();
            l -= telescoped(&sigma, j) * logs[j] + telescoped(&tau, j) * logs[j].conj();
        }
        SignedLn::re_exp(l)
    }
}

/// Two-dimensional quadrature for n = 1 over t > 0, s ∈ R.
pub fn wedge_quadrature(lambda: f64, sigma: f64, tau: f64, opts: &QuadOptions) -> Result<QuadResult> {
    wedge_rhs(1, &[lambda], &[sigma], &[tau])?;
    let g = wedge_integrand(vec![lambda], vec![sigma], vec![tau]);
    let f = |x: &[f64]| g(x).value();
    let region = IteratedRegion::new(2, |level: usize, _: &[f64]| {
        if level == 0 {
            (0.0, f64::INFINITY)
        } else {
            (f64::NEG_INFINITY, f64::INFINITY)
        }
    });
    quad_adaptive(&f, &region, opts)
}

/// Sampler on (T, S): a beta-prime cone for T with exponents shrunk from
/// the integrand's, independent Cauchy entries for S.
pub fn wedge_proposal(lambda: &[f64], sigma: &[f64], tau: &[f64]) -> Result<ProductProposal> {
    let n = lambda.len();
    let nf = n as f64;
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for i in 1..=n {
        let (l, s, t) = (lambda[i - 1], sigma[i - 1], tau[i - 1]);
        a.push(0.8 * (l - 0.5 * (nf + i as f64)));
        b.push(0.8 * (s + t - l - 0.5 * (nf - i as f64)));
    }
    let cone = GammaCone::new(Field::R, n, DiagonalLaw::BetaPrime { a, b }, OffDiagonalLaw::Cauchy { scale: 1.0 })?;
    let m = hermitian_coords::dim(Field::R, n);
    let parts: Vec<Box<dyn Proposal>> = vec![Box::new(cone), Box::new(CauchyProduct::uniform(m, 2.0))];
    Ok(ProductProposal::new(parts))
}

/// Monte Carlo over the wedge, n(n+1) real dimensions.
pub fn wedge_mc(lambda: &[f64], sigma: &[f64], tau: &[f64], samples: u64, seed: u64) -> Result<MCEstimate> {
    let n = lambda.len();
    wedge_rhs(n, lambda, sigma, tau)?;
    let proposal = wedge_proposal(lambda, sigma, tau)?;
    mc_integrate(wedge_integrand(lambda.to_vec(), sigma.to_vec(), tau.to_vec()), &proposal, samples, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{beta_halfline, cauchy_beta, gamma};

    #[test]
    fn n1_example() {
        let v = wedge_rhs(1, &[3.0], &[4.0], &[4.0]).unwrap();
        let e = 2f64.powi(-6) * PI * gamma(2.0).unwrap() * gamma(5.0).unwrap() / gamma(4.0).unwrap().powi(2);
        assert!((v - e).abs() < 1e-14 * e);
    }

    #[test]
    fn n1_factorizes() {
        for (l, s, t) in [(3.0, 4.0, 4.0), (2.5, 3.0, 2.0), (1.7, 1.5, 2.5)] {
            let v = wedge_rhs(1, &[l], &[s], &[t]).unwrap();
            let c = cauchy_beta(s.into(), t.into()).unwrap().re;
            let b = beta_halfline((l - 1.0).into(), (s + t - 1.0).into()).unwrap().re;
            assert!((v - c * b).abs() < 1e-12 * v);
        }
    }

    #[test]
    fn n1_quadrature() {
        let o = QuadOptions::default().with_rel_tol(1e-9);
        for (l, s, t) in [(3.0, 4.0, 4.0), (2.5, 3.0, 2.5), (4.0, 3.5, 4.5)] {
            let q = wedge_quadrature(l, s, t, &o).unwrap();
            let e = wedge_rhs(1, &[l], &[s], &[t]).unwrap();
            assert!((q.value - e).abs() < 1e-7 * e, "{l} {s} {t}: {} vs {e}", q.value);
        }
    }

    #[test]
    fn corner_logs_match_determinants() {
        let a = DMatrix::from_fn(3, 3, |i, j| {
            let h = if i == j { 2.0 + i as f64 } else { 0.3 };
            Complex64::new(h, (i as f64 - j as f64) * 0.2 + if i == j { 3.0 } else { 1.1 })
        });
        let l = ln_corner_dets(&a);
        let d = a.determinant();
        assert!((l[2].exp() - d).norm() < 1e-10 * d.norm());
    }

    #[test]
    fn domain() {
        assert!(wedge_rhs(2, &[1.0, 1.0], &[7.0, 5.0], &[7.0, 5.0]).is_err());
        assert!(wedge_rhs(2, &[6.0], &[7.0, 5.0], &[7.0, 5.0]).is_err());
    }
}
