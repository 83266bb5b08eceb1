//! Sequential proposal on Herm_n(K), K = R or C, built by bordering.
//!
//! With T = [[A, b], [b*, c]] one has
//! det(1+iT) = det(1+iA) · (1 + ic + b*(1+iA)^{-1}b). The column b is drawn
//! as (1+A²)^{1/2} y with y multivariate Cauchy, and c as a Cauchy variable
//! centred and scaled to the Schur complement. Importance weights of
//! det(1+T²)^{-α}-type integrands stay bounded once α ≥ (n+1)/2.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::algebra::{hermitian_coords, Field};
use crate::error::{Error, Result};
use crate::integrate::mc::McRng;
use crate::integrate::proposal::{Proposal, ProposalKind};
use crate::special::ln_gamma_real;

#[derive(Debug, Clone, PartialEq)]
pub struct BorderedCauchy {
    field: Field,
    n: usize,
}

impl BorderedCauchy {
    pub fn new(field: Field, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("matrix size must be at least 1".into()));
        }
        if field == Field::H {
            return Err(Error::Unsupported("bordered proposal over the quaternions".into()));
        }
        Ok(Self { field, n })
    }

    /// Offset of the coordinates of entry (i, j), i < j.
    fn offset(&self, i: usize, j: usize) -> usize {
        let before: usize = (0..i).map(|r| self.n - 1 - r).sum();
        self.n + self.field.dim() * (before + j - i - 1)
    }

    fn entry(&self, x: &[f64], i: usize, j: usize) -> Complex64 {
        let o = self.offset(i, j);
        match self.field {
            Field::R => Complex64::new(x[o], 0.0),
            _ => Complex64::new(x[o], x[o + 1]),
        }
    }

    fn set_entry(&self, x: &mut [f64], i: usize, j: usize, v: Complex64) {
        let o = self.offset(i, j);
        x[o] = v.re;
        if self.field != Field::R {
            x[o + 1] = v.im;
        }
    }

    /// Leading k×k block of the matrix with coordinates `x`.
    fn block(&self, x: &[f64], k: usize) -> DMatrix<Complex64> {
        DMatrix::from_fn(k, k, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => Complex64::new(x[i], 0.0),
            std::cmp::Ordering::Less => self.entry(x, i, j),
            std::cmp::Ordering::Greater => self.entry(x, j, i).conj(),
        })
    }

    /// Real dimension of the border column at stage k.
    fn border_dim(&self, k: usize) -> usize {
        k * self.field.dim()
    }

    fn ln_t1(m: usize, y2: f64) -> f64 {
        let h = 0.5 * (m as f64 + 1.0);
        ln_gamma_real(h).expect("positive").re - h * PI.ln() - h * y2.ln_1p()
    }

    fn ln_cauchy(loc: f64, scale: f64, c: f64) -> f64 {
        let u = (c - loc) / scale;
        -(PI * scale).ln() - (u * u).ln_1p()
    }

    /// One stage: with A the leading block, returns (V, λ) of A.
    fn eigen(a: DMatrix<Complex64>) -> (DMatrix<Complex64>, Vec<f64>) {
        let e = SymmetricEigen::new(a);
        (e.eigenvectors, e.eigenvalues.iter().copied().collect())
    }

    /// Walks the stages. With `rng` the border and corner of each stage are
    /// drawn into `x`; otherwise they are read from it. Returns ln q.
    fn walk(&self, x: &mut [f64], mut rng: Option<&mut McRng>) -> f64 {
        let mut ln_q = 0.0;
        for k in 0..self.n {
            let (v, lam) = if k == 0 { (DMatrix::zeros(0, 0), Vec::new()) } else { Self::eigen(self.block(x, k)) };
            let m = self.border_dim(k);
            let s: Vec<f64> = lam.iter().map(|l| l.hypot(1.0)).collect();
            // u = V* b, y = S^{-1} b in the eigenbasis: y_j = u_j / s_j.
            let u: DVector<Complex64> = match rng.as_deref_mut() {
                Some(r) => {
                    let g: f64 = r.sample::<f64, _>(StandardNormal).abs();
                    let yv = DVector::from_fn(k, |_, _| {
                        let re: f64 = r.sample(StandardNormal);
                        let im: f64 = if self.field == Field::R { 0.0 } else { r.sample(StandardNormal) };
                        Complex64::new(re, im) / g
                    });
                    let u = DVector::from_fn(k, |j, _| yv[j] * s[j]);
                    let b = &v * &u;
                    for i in 0..k {
                        self.set_entry(x, i, k, b[i]);
                    }
                    u
                }
                None => {
                    let b = DVector::from_fn(k, |i, _| self.entry(x, i, k));
                    v.adjoint() * b
                }
            };
            let y2: f64 = (0..k).map(|j| u[j].norm_sqr() / (s[j] * s[j])).sum();
            if k > 0 {
                let ln_det_s: f64 = s.iter().map(|v| v.ln()).sum();
                ln_q += Self::ln_t1(m, y2) - self.field.dim() as f64 * ln_det_s;
            }
            let w_im: f64 = -(0..k).map(|j| u[j].norm_sqr() * lam[j] / (s[j] * s[j])).sum::<f64>();
            let (loc, scale) = (-w_im, 1.0 + y2);
            if let Some(r) = rng.as_deref_mut() {
                let t: f64 = r.random();
                x[k] = loc + scale * (PI * (t - 0.5)).tan();
            }
            ln_q += Self::ln_cauchy(loc, scale, x[k]);
        }
        ln_q
    }
}

impl Proposal for BorderedCauchy {
    fn dim(&self) -> usize {
        hermitian_coords::dim(self.field, self.n)
    }
    fn kind(&self) -> ProposalKind {
        ProposalKind::BorderedCauchy
    }
    fn draw(&self, rng: &mut McRng, x: &mut [f64]) -> Option<f64> {
        let l = self.walk(x, Some(rng));
        l.is_finite().then_some(l)
    }
    fn ln_density(&self, x: &[f64]) -> f64 {
        let mut y = x.to_vec();
        self.walk(&mut y, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::mc::{chunk_rng, mc_integrate, SignedLn};

    #[test]
    fn density_matches_draw() {
        for (field, n) in [(Field::R, 1), (Field::R, 3), (Field::C, 2), (Field::C, 3)] {
            let p = BorderedCauchy::new(field, n).unwrap();
            let mut rng = chunk_rng(4, 0);
            let mut x = vec![0.0; p.dim()];
            for _ in 0..200 {
                let l = p.draw(&mut rng, &mut x).unwrap();
                let m = p.ln_density(&x);
                assert!((l - m).abs() < 1e-9 * l.abs().max(1.0), "{field} {n}: {l} vs {m}");
            }
        }
    }

    #[test]
    fn normalized() {
        // ∫ q = 1, checked against a product Cauchy proposal.
        let p = BorderedCauchy::new(Field::R, 2).unwrap();
        let base = crate::integrate::CauchyProduct::uniform(3, 1.0);
        let e = mc_integrate(|x| SignedLn::positive(p.ln_density(x)), &base, 400_000, 5).unwrap();
        assert!((e.mean - 1.0).abs() < 4.0 * e.stderr + 1e-3, "{} ± {}", e.mean, e.stderr);
    }

    #[test]
    fn quaternions_rejected() {
        assert!(BorderedCauchy::new(Field::H, 2).is_err());
        assert!(BorderedCauchy::new(Field::R, 0).is_err());
    }
}
