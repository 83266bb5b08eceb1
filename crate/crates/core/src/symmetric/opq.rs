//! Beta integral over O(p,q)/(O_p × O_q) realized by dissipative block
//! matrices, in coordinates L (p×(q-p)), M symmetric, N skew-symmetric.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::algebra::{hermitian_coords, leading_minors_pd, Field, MatK};
use crate::error::{Error, Result};
use crate::integrate::{
    mc_integrate, quad_adaptive, CauchyProduct, DiagonalLaw, GammaCone, IteratedRegion, MCEstimate,
    OffDiagonalLaw, ProductProposal, Proposal, QuadOptions, QuadResult, SignedLn,
};
use crate::special::GammaProduct;

/// Note on the constant in front of the π-power.
pub const OPQ_NOTE: &str =
    "constant: π^{k+(q-p)/2-1} used; the published π^{k-(q-p)/2-1} disagrees by π^{q-p}";

/// Note attached to runs with p > 1.
pub const OPQ_EXPERIMENTAL_NOTE: &str = "p > 1: experimental, coordinate Jacobian taken as 1";

fn check(p: usize, q: usize, lambda: &[f64], sigma: &[f64]) -> Result<()> {
    if p == 0 || q < p {
        return Err(Error::InvalidParameter(format!("need 1 ≤ p ≤ q, got p={p}, q={q}")));
    }
    if lambda.len() != p || sigma.len() != p {
        return Err(Error::InvalidParameter(format!(
            "`λ` and `σ` must have p={p} entries (got {} and {})",
            lambda.len(),
            sigma.len()
        )));
    }
    Ok(())
}

fn ln_product(p: usize, q: usize, lambda: &[f64], sigma: &[f64], pi_shift: f64) -> Result<f64> {
    check(p, q, lambda, sigma)?;
    let (pf, qf) = (p as f64, q as f64);
    let mut g = GammaProduct::one();
    for k in 1..=p {
        let kf = k as f64;
        let (l, s) = (lambda[k - 1], sigma[k - 1]);
        let args = [
            (format!("λ_{k} - (q+{k})/2 + 1"), l - 0.5 * (qf + kf) + 1.0),
            (format!("σ_{k} - λ_{k} - (p-{k})/2"), s - l - 0.5 * (pf - kf)),
            (format!("σ_{k} - p + {k}"), s - pf + kf),
        ];
        for (what, x) in &args {
            if !(*x > 0.0) {
                return Err(Error::domain(format!("{what} = {x} must be positive")));
            }
        }
        g = g
            .pow(PI, kf + pi_shift * 0.5 * (qf - pf) - 1.0)
            .gamma(args[0].1)?
            .gamma(args[1].1)?
            .inv_gamma(args[2].1)?;
    }
    Ok(g.ln().re)
}

/// ∏_k π^{k+(q-p)/2-1} Γ(λ_k-(q+k)/2+1) Γ(σ_k-λ_k-(p-k)/2) / Γ(σ_k-p+k).
pub fn opq_rhs(p: usize, q: usize, lambda: &[f64], sigma: &[f64]) -> Result<f64> {
    Ok(ln_product(p, q, lambda, sigma, 1.0)?.exp())
}

/// The product with the published π^{k-(q-p)/2-1}.
pub fn opq_rhs_published(p: usize, q: usize, lambda: &[f64], sigma: &[f64]) -> Result<f64> {
    Ok(ln_product(p, q, lambda, sigma, -1.0)?.exp())
}

/// Number of real coordinates: p(q-p) for L, p(p+1)/2 for M, p(p-1)/2 for N.
pub fn opq_dim(p: usize, q: usize) -> usize {
    p * q
}

fn telescoped(v: &[f64], j: usize) -> f64 {
    v[j] - v.get(j + 1).copied().unwrap_or(0.0)
}

/// Splits coordinates into (L, U = M - LLᵗ, N); L row-major, U in
/// `hermitian_coords` order, N by its strictly upper entries.
fn unpack(p: usize, q: usize, x: &[f64]) -> (DMatrix<f64>, MatK, DMatrix<f64>) {
    let r = q - p;
    let l = DMatrix::from_row_slice(p, r, &x[..p * r]);
    let m = hermitian_coords::dim(Field::R, p);
    let u = hermitian_coords::to_matrix(Field::R, p, &x[p * r..p * r + m]);
    let mut n = DMatrix::zeros(p, p);
    let mut k = p * r + m;
    for i in 0..p {
        for j in (i + 1)..p {
            n[(i, j)] = x[k];
            n[(j, i)] = -x[k];
            k += 1;
        }
    }
    (l, u, n)
}

/// Integrand on (L, U, N) where U = M - LLᵗ; the shift M ↦ U has unit
/// Jacobian for fixed L.
pub fn opq_integrand(q: usize, lambda: Vec<f64>, sigma: Vec<f64>) -> impl Fn(&[f64]) -> SignedLn + Sync {
    let p = lambda.len();
    let top = 0.5 * (p + q) as f64;
    move |x: &[f64]| {
        let (l, u, skew) = unpack(p, q, x);
        let Some(minors) = leading_minors_pd(&u) else {
            return SignedLn::ZERO;
        };
        let llt = &l * l.transpose();
        let k = DMatrix::from_fn(p, p, |i, j| {
            (if i == j { 1.0 } else { 0.0 }) + u.get(i, j).w + llt[(i, j)] + skew[(i, j)]
        });
        let mut ln = -top * minors[p - 1].ln();
        for j in 0..p {
            // symmetric part 1 + M > 0, so every leading minor is positive
            let dj = k.view((0, 0), (j + 1, j + 1)).determinant();
            if !(dj > 0.0) {
                return SignedLn::ZERO;
            }
            ln += telescoped(&lambda, j) * minors[j].ln() - telescoped(&sigma, j) * dj.ln();
        }
        SignedLn::positive(ln)
    }
}

/// Quadrature for p = 1 over (L, M) with M > |L|², q ≤ 4.
pub fn opq_quadrature(q: usize, lambda: f64, sigma: f64, opts: &QuadOptions) -> Result<QuadResult> {
    opq_rhs(1, q, &[lambda], &[sigma])?;
    if q > 4 {
        return Err(Error::Unsupported(format!("quadrature in {q} dimensions")));
    }
    let g = opq_integrand(q, vec![lambda], vec![sigma]);
    let r = q - 1;
    let f = |x: &[f64]| {
        let l2: f64 = x[..r].iter().map(|v| v * v).sum();
        let mut y = x.to_vec();
        y[r] = x[r] - l2;
        g(&y).value()
    };
    let region = IteratedRegion::new(q, move |level: usize, outer: &[f64]| {
        if level < r {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else {
            (outer.iter().map(|v| v * v).sum(), f64::INFINITY)
        }
    });
    quad_adaptive(&f, &region, opts)
}

/// Sampler on (L, U, N): Cauchy entries for L and N, a beta-prime cone for U.
pub fn opq_proposal(q: usize, lambda: &[f64], sigma: &[f64]) -> Result<ProductProposal> {
    let p = lambda.len();
    let (pf, qf) = (p as f64, q as f64);
    let mut a = Vec::with_capacity(p);
    let mut b = Vec::with_capacity(p);
    for i in 1..=p {
        let (l, s) = (lambda[i - 1], sigma[i - 1]);
        a.push(0.8 * (l - 0.5 * (qf + i as f64) + 1.0));
        b.push(0.8 * (s - l - 0.5 * (pf - i as f64)));
    }
    let mut parts: Vec<Box<dyn Proposal>> = Vec::new();
    if q > p {
        parts.push(Box::new(CauchyProduct::uniform(p * (q - p), 1.0)));
    }
    parts.push(Box::new(GammaCone::new(
        Field::R,
        p,
        DiagonalLaw::BetaPrime { a, b },
        OffDiagonalLaw::Cauchy { scale: 1.0 },
    )?));
    if p > 1 {
        parts.push(Box::new(CauchyProduct::uniform(p * (p - 1) / 2, 1.0)));
    }
    Ok(ProductProposal::new(parts))
}

pub fn opq_mc(q: usize, lambda: &[f64], sigma: &[f64], samples: u64, seed: u64) -> Result<MCEstimate> {
    let p = lambda.len();
    opq_rhs(p, q, lambda, sigma)?;
    let proposal = opq_proposal(q, lambda, sigma)?;
    mc_integrate(opq_integrand(q, lambda.to_vec(), sigma.to_vec()), &proposal, samples, seed)
}
