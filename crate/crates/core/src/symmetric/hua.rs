//! Hua integrals: det(1-ZZ*)^λ over matrix balls and det(1+T²)^{-α} over
//! real symmetric matrices.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{hermitian_coords, hermitian_eigenvalues, leading_minors_pd, Field, MatK};
use crate::error::{Error, Result};
use crate::integrate::{
    BorderedCauchy,
    mc_integrate, quad_adaptive, BallRejection, IteratedRegion, MCEstimate,
    QuadOptions, QuadResult, SignedLn,
};
use crate::special::{ln_gamma_real, selberg_closed_form, GammaProduct, SelbergParams, SelbergVariant};
use crate::symmetric::eigen::eigen_reduction_constant;

fn check_ball(p: usize, q: usize, lambda: f64) -> Result<()> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidParameter(format!("empty {p}×{q} matrix ball")));
    }
    if !(lambda > -1.0) || !lambda.is_finite() {
        return Err(Error::domain(format!("matrix ball integral needs λ > -1, got {lambda}")));
    }
    Ok(())
}

/// ∫_{ZZ*<1} det(1-ZZ*)^λ dZ over p×q matrices. Over C this is the explicit
/// gamma product; over R and H it is obtained by reduction to singular
/// values and the Selberg integral.
pub fn hua_ball_rhs(field: Field, p: usize, q: usize, lambda: f64) -> Result<f64> {
    check_ball(p, q, lambda)?;
    if field != Field::C {
        return hua_ball_reduced(field, p, q, lambda);
    }
    let mut g = GammaProduct::one().pow(PI, (p * q) as f64);
    for j in 1..=q {
        g = g.gamma(lambda + j as f64)?;
    }
    for j in 1..=p {
        g = g.gamma(lambda + j as f64)?;
    }
    for j in 1..=(p + q) {
        g = g.inv_gamma(lambda + j as f64)?;
    }
    Ok(g.real())
}

/// The matrix ball integral through the singular-value reduction: with
/// m = min(p,q), n = max(p,q) and x = μ², the integral becomes
/// π^{dmn/2} S_m(d(n-m+1)/2, λ+1, d/2) / L, where S_m is the unit-box
/// Selberg integral and L = ∏_j Γ(a+jd/2)Γ(1+(j+1)d/2)/Γ(1+d/2).
pub fn hua_ball_reduced(field: Field, p: usize, q: usize, lambda: f64) -> Result<f64> {
    check_ball(p, q, lambda)?;
    let (m, n) = (p.min(q), p.max(q));
    let d = field.d();
    let g = 0.5 * d;
    let a = 0.5 * d * (n - m + 1) as f64;
    let s = selberg_closed_form(SelbergVariant::UnitBox, &SelbergParams::real(m, a, lambda + 1.0, g))?;
    let mut ln_l = 0.0;
    for j in 0..m {
        let jf = j as f64;
        ln_l += ln_gamma_real(a + jf * g)?.re + ln_gamma_real(1.0 + (jf + 1.0) * g)?.re
            - ln_gamma_real(1.0 + g)?.re;
    }
    Ok((0.5 * d * (m * n) as f64 * PI.ln() + s.re.ln() - ln_l).exp())
}

/// det(1-ZZ*)^λ on the ball, Z read row-major from real coordinates.
pub fn hua_ball_integrand(
    field: Field,
    p: usize,
    q: usize,
    lambda: f64,
) -> impl Fn(&[f64]) -> SignedLn + Sync {
    move |x: &[f64]| {
        let z = MatK::from_coords(field, p, q, x);
        let w = &MatK::identity(field, p) - &(&z * &z.adjoint());
        match leading_minors_pd(&w) {
            Some(m) => SignedLn::positive(lambda * m[p - 1].ln()),
            None => SignedLn::ZERO,
        }
    }
}

/// Quadrature of the ball integral when min(p,q) = 1, where the ball is a
/// Euclidean ball of real dimension d·max(p,q) ≤ 4.
pub fn hua_ball_quadrature(
    field: Field,
    p: usize,
    q: usize,
    lambda: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    check_ball(p, q, lambda)?;
    let dim = field.dim() * p * q;
    if p.min(q) != 1 || dim > 4 {
        return Err(Error::Unsupported(format!(
            "quadrature over the {p}×{q} ball over {field} ({dim} real dimensions)"
        )));
    }
    let f = |x: &[f64]| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        if r2 >= 1.0 {
            0.0
        } else {
            (1.0 - r2).powf(lambda)
        }
    };
    let region = IteratedRegion::new(dim, |_level: usize, outer: &[f64]| {
        let r = (1.0 - outer.iter().map(|v| v * v).sum::<f64>()).max(0.0).sqrt();
        (-r, r)
    });
    quad_adaptive(&f, &region, opts)
}

/// Monte Carlo over the ball by rejection from a Frobenius ball.
pub fn hua_ball_mc(
    field: Field,
    p: usize,
    q: usize,
    lambda: f64,
    samples: u64,
    seed: u64,
) -> Result<MCEstimate> {
    check_ball(p, q, lambda)?;
    let proposal = BallRejection::new(field, p, q)?;
    mc_integrate(hua_ball_integrand(field, p, q, lambda), &proposal, samples, seed)
}

/// Linear-fractional action Z ↦ (a+Zc)^{-1}(b+Zd) on the unit disk.
pub fn disk_lf_map(g: [Complex64; 4], z: Complex64) -> Complex64 {
    let [a, b, c, d] = g;
    (b + z * d) / (a + z * c)
}

fn check_symm(n: usize, alpha: Complex64, beta: Complex64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("matrix size must be at least 1".into()));
    }
    let nf = n as f64;
    if (alpha + beta).re <= nf || alpha.re <= 0.5 * (nf - 1.0) || beta.re <= 0.5 * (nf - 1.0) {
        return Err(Error::domain(format!(
            "symmetric-matrix Hua integral at n={n} needs Re(α+β) > {n} and Re α, Re β > {}",
            0.5 * (nf - 1.0)
        )));
    }
    Ok(())
}

/// ∫_{Symm_n(R)} det(1+iT)^{-α} det(1-iT)^{-β} dT. For α = β this is the
/// explicit product; otherwise the eigenvalue reduction to the Cauchy-type
/// Selberg integral with γ = 1/2.
pub fn hua_symm_rhs(n: usize, alpha: Complex64, beta: Complex64) -> Result<f64> {
    check_symm(n, alpha, beta)?;
    if alpha != beta {
        return hua_symm_reduced(n, alpha, beta);
    }
    let nf = n as f64;
    let mut g = GammaProduct::one()
        .pow(PI, nf * (nf + 1.0) / 4.0)
        .gamma(alpha - nf / 2.0)?
        .inv_gamma(alpha)?;
    for j in 1..n {
        let jf = j as f64;
        g = g.gamma(2.0 * alpha - (nf + jf) / 2.0)?.inv_gamma(2.0 * alpha - jf)?;
    }
    Ok(g.real())
}

/// C_n(R) (2π)^n S^{Cauchy}_n(α, β, 1/2) / n!.
pub fn hua_symm_reduced(n: usize, alpha: Complex64, beta: Complex64) -> Result<f64> {
    check_symm(n, alpha, beta)?;
    let p = SelbergParams { n, alpha, beta, gamma: 0.5 };
    let s = selberg_closed_form(SelbergVariant::Cauchy, &p)?.re;
    let c = eigen_reduction_constant(Field::R, n)?;
    let ln_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
    Ok(c * s * (n as f64 * (2.0 * PI).ln() - ln_fact).exp())
}

/// ln det(1+iT) on the branch continuous from T = 0.
pub(crate) fn ln_det_one_plus_i(t: &MatK) -> Complex64 {
    let n = t.rows();
    match n {
        1 => Complex64::new(1.0, t.get(0, 0).w).ln(),
        2 => {
            let (a, b, c) = (t.get(0, 0).w, t.get(0, 1).w, t.get(1, 1).w);
            Complex64::new(1.0 - (a * c - b * b), a + c).ln()
        }
        _ => hermitian_eigenvalues(t)
            .map(|ev| ev.iter().map(|&l| Complex64::new(1.0, l).ln()).sum())
            .unwrap_or(Complex64::new(f64::NAN, 0.0)),
    }
}

/// Re det(1+iT)^{-α} det(1-iT)^{-β} on Symm_n(R) coordinates.
pub fn hua_symm_integrand(n: usize, alpha: f64, beta: f64) -> impl Fn(&[f64]) -> SignedLn + Sync {
    move |x: &[f64]| {
        let t = hermitian_coords::to_matrix(Field::R, n, x);
        let l = ln_det_one_plus_i(&t);
        SignedLn::re_exp(-alpha * l - beta * l.conj())
    }
}

/// Quadrature over Symm_n(R) for n ≤ 2. For n = 2 the matrix
/// [[u+r cos φ, r sin φ], [r sin φ, u-r cos φ]] is integrated over
/// (u, r, φ) with dT = 2r du dr dφ.
pub fn hua_symm_quadrature(n: usize, alpha: f64, beta: f64, opts: &QuadOptions) -> Result<QuadResult> {
    check_symm(n, alpha.into(), beta.into())?;
    let g = hua_symm_integrand(n, alpha, beta);
    match n {
        1 => {
            let f = |x: &[f64]| g(x).value();
            quad_adaptive(&f, &IteratedRegion::new(1, |_, _: &[f64]| (f64::NEG_INFINITY, f64::INFINITY)), opts)
        }
        2 => {
            let f = |x: &[f64]| {
                let (u, r, phi) = (x[0], x[1], x[2]);
                let t = [u + r * phi.cos(), u - r * phi.cos(), r * phi.sin()];
                2.0 * r * g(&t).value()
            };
            let region = IteratedRegion::new(3, |level: usize, _: &[f64]| match level {
                0 => (f64::NEG_INFINITY, f64::INFINITY),
                1 => (0.0, f64::INFINITY),
                _ => (0.0, 2.0 * PI),
            });
            quad_adaptive(&f, &region, opts)
        }
        _ => Err(Error::Unsupported(format!("quadrature over Symm_{n}(R)"))),
    }
}

/// Monte Carlo over Symm_n(R) with a Cauchy product proposal.
pub fn hua_symm_mc(n: usize, alpha: f64, beta: f64, samples: u64, seed: u64) -> Result<MCEstimate> {
    check_symm(n, alpha.into(), beta.into())?;
    mc_integrate(
        hua_symm_integrand(n, alpha, beta),
        &BorderedCauchy::new(Field::R, n)?,
        samples,
        seed,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn ball_examples() {
        assert!((hua_ball_rhs(Field::C, 1, 1, 1.0).unwrap() - PI / 2.0).abs() < 1e-13);
        let expect = PI * PI * gamma(2.0).unwrap() * gamma(2.0).unwrap() * gamma(3.0).unwrap()
            / (gamma(2.0).unwrap() * gamma(3.0).unwrap() * gamma(4.0).unwrap());
        assert!((hua_ball_rhs(Field::C, 1, 2, 1.0).unwrap() - expect).abs() < 1e-13 * expect);
        assert!((hua_ball_rhs(Field::R, 1, 1, 1.0).unwrap() - 4.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn ball_reduction_matches_explicit_over_c() {
        for (p, q, l) in [(1, 1, 0.5), (2, 2, 1.0), (2, 3, 0.3), (3, 1, 2.0)] {
            let a = hua_ball_rhs(Field::C, p, q, l).unwrap();
            let b = hua_ball_reduced(Field::C, p, q, l).unwrap();
            assert!((a - b).abs() < 1e-12 * a, "{p}×{q}: {a} vs {b}");
        }
    }

    #[test]
    fn ball_volumes() {
        // λ = 0: R^{1×k} gives the volume of the unit k-ball, H^{1×1} the 4-ball.
        let v = hua_ball_rhs(Field::R, 1, 3, 0.0).unwrap();
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-12);
        let v = hua_ball_rhs(Field::H, 1, 1, 0.0).unwrap();
        assert!((v - PI * PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn ball_quadrature() {
        let o = QuadOptions::default().with_rel_tol(1e-9);
        for (f, p, q, l) in [(Field::C, 1, 1, 1.0), (Field::C, 1, 2, 1.0), (Field::R, 2, 1, 0.7)] {
            let r = hua_ball_quadrature(f, p, q, l, &o).unwrap();
            let e = hua_ball_rhs(f, p, q, l).unwrap();
            assert!((r.value - e).abs() < 1e-7 * e, "{f} {p}×{q}: {} vs {e}", r.value);
        }
        assert!(hua_ball_quadrature(Field::C, 2, 2, 1.0, &o).is_err());
    }

    #[test]
    fn ball_domain() {
        assert!(hua_ball_rhs(Field::C, 1, 1, -1.0).is_err());
        assert!(hua_ball_rhs(Field::C, 0, 1, 1.0).is_err());
    }

    #[test]
    fn symm_examples() {
        let v = hua_symm_rhs(1, c(1.0), c(1.0)).unwrap();
        assert!((v - PI).abs() < 1e-13);
        let a = 2.3;
        let v = hua_symm_rhs(1, c(a), c(a)).unwrap();
        let e = PI.sqrt() * gamma(a - 0.5).unwrap() / gamma(a).unwrap();
        assert!((v - e).abs() < 1e-13 * e);
    }

    #[test]
    fn symm_reduction_matches_explicit() {
        for n in 1..=4 {
            for a in [2.5, 3.0, 4.2] {
                let e = hua_symm_rhs(n, c(a), c(a)).unwrap();
                let r = hua_symm_reduced(n, c(a), c(a)).unwrap();
                assert!((e - r).abs() < 1e-11 * e, "n={n} α={a}: {e} vs {r}");
            }
        }
    }

    #[test]
    fn symm_quadrature() {
        let o = QuadOptions::default().with_rel_tol(1e-8);
        let r = hua_symm_quadrature(2, 2.0, 2.0, &o).unwrap();
        let e = hua_symm_rhs(2, c(2.0), c(2.0)).unwrap();
        assert!((r.value - e).abs() < 1e-6 * e, "{} vs {e}", r.value);
        let r = hua_symm_quadrature(1, 1.2, 2.1, &o).unwrap();
        let e = hua_symm_rhs(1, c(1.2), c(2.1)).unwrap();
        assert!((r.value - e).abs() < 1e-7 * e, "{} vs {e}", r.value);
    }

    #[test]
    fn branch_of_log_det() {
        let t = hermitian_coords::to_matrix(Field::R, 3, &[3.0, -2.0, 5.0, 1.0, 4.0, -0.5]);
        let ev = hermitian_eigenvalues(&t).unwrap();
        let l = ln_det_one_plus_i(&t);
        let direct: Complex64 = ev.iter().map(|&v| Complex64::new(1.0, v).ln()).sum();
        assert!((l - direct).norm() < 1e-12);
        let t2 = hermitian_coords::to_matrix(Field::R, 2, &[3.0, 5.0, 1.0]);
        let ev = hermitian_eigenvalues(&t2).unwrap();
        let direct: Complex64 = ev.iter().map(|&v| Complex64::new(1.0, v).ln()).sum();
        assert!((ln_det_one_plus_i(&t2) - direct).norm() < 1e-12);
    }

    #[test]
    fn lf_invariance_pointwise() {
        let (alpha, beta) = (Complex64::new(1.3, 0.4), Complex64::new(0.2, -0.7));
        let k = (alpha.norm_sqr() - beta.norm_sqr()).sqrt();
        let (alpha, beta) = (alpha / k, beta / k);
        let g = [alpha, beta, beta.conj(), alpha.conj()];
        let z = Complex64::new(0.3, -0.5);
        let u = disk_lf_map(g, z);
        let lhs = 1.0 - u.norm_sqr();
        let rhs = (1.0 - z.norm_sqr()) / (g[0] + z * g[2]).norm_sqr();
        assert!((lhs - rhs).abs() < 1e-12);
    }
}
