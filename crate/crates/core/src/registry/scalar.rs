//! Left-hand integrands of the one-dimensional and Selberg-type identities.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrate::{
    mc_integrate, quad_1d, quad_adaptive, BoxUniform, CauchyProduct, DiagonalLaw, GammaCone, IteratedRegion,
    MCEstimate, OffDiagonalLaw, ProductProposal, Proposal, QuadOptions, QuadResult, SignedLn,
};
use crate::algebra::Field;
use crate::special::{ln_gamma, SelbergParams, SelbergVariant};

pub fn euler_quadrature(alpha: f64, beta: f64, opts: &QuadOptions) -> Result<QuadResult> {
    quad_1d(|x| x.powf(alpha - 1.0) * (1.0 - x).powf(beta - 1.0), 0.0, 1.0, opts)
}

/// Re ∫ (1+ix)^{-μ}(1-ix)^{-ν} dx; the imaginary part vanishes for real μ, ν.
pub fn cauchy_quadrature(mu: f64, nu: f64, opts: &QuadOptions) -> Result<QuadResult> {
    quad_1d(
        |x| (-(mu + nu) / 2.0 * x.mul_add(x, 1.0).ln()).exp() * ((nu - mu) * x.atan()).cos(),
        f64::NEG_INFINITY,
        f64::INFINITY,
        opts,
    )
}

pub fn halfline_quadrature(alpha: f64, sigma: f64, opts: &QuadOptions) -> Result<QuadResult> {
    quad_1d(|x| ((alpha - 1.0) * x.ln() - sigma * x.ln_1p()).exp(), 0.0, f64::INFINITY, opts)
}

/// Real and imaginary parts of ∫_0^π sin^μ t e^{iνt} dt.
pub fn lobachevsky_quadrature(mu: f64, nu: f64, opts: &QuadOptions) -> Result<(QuadResult, QuadResult)> {
    let re = quad_1d(|t| t.sin().max(0.0).powf(mu) * (nu * t).cos(), 0.0, PI, opts)?;
    let im = quad_1d(|t| t.sin().max(0.0).powf(mu) * (nu * t).sin(), 0.0, PI, opts)?;
    Ok((re, im))
}

fn ln_sinh(y: f64) -> f64 {
    if y > 20.0 {
        y - std::f64::consts::LN_2 + (-2.0 * y).exp().ln_1p()
    } else {
        y.sinh().ln()
    }
}

/// Note on the range of the Wilson integral.
pub const WILSON_NOTE: &str =
    "integral taken over the half-line x > 0; the published form integrates over the whole line, which doubles the value";

/// (1/2π) ∫_0^∞ |∏Γ(a_j+ix) / Γ(2ix)|² dx with |Γ(2ix)|^{-2} = 2x sinh(2πx)/π.
pub fn wilson_quadrature(a: [f64; 4], opts: &QuadOptions) -> Result<QuadResult> {
    let f = |x: f64| {
        if x == 0.0 {
            return 0.0;
        }
        let mut l = (2.0 * x / PI).ln() + ln_sinh(2.0 * PI * x);
        for &aj in &a {
            match ln_gamma(Complex64::new(aj, x)) {
                Ok(g) => l += 2.0 * g.re,
                Err(_) => return f64::NAN,
            }
        }
        l.exp() / (2.0 * PI)
    };
    quad_1d(f, 0.0, f64::INFINITY, opts)
}

fn ln_vandermonde(x: &[f64], gamma: f64) -> f64 {
    let mut l = 0.0;
    for k in 0..x.len() {
        for m in (k + 1)..x.len() {
            l += 2.0 * gamma * (x[k] - x[m]).abs().ln();
        }
    }
    l
}

fn real_params(p: &SelbergParams) -> Result<(f64, f64)> {
    if p.alpha.im != 0.0 || p.beta.im != 0.0 {
        return Err(Error::Unsupported("numerical Selberg integrals with complex α, β".into()));
    }
    Ok((p.alpha.re, p.beta.re))
}

/// Selberg-type integrand of the given variant, as a signed logarithm.
pub fn selberg_integrand(variant: SelbergVariant, p: &SelbergParams) -> Result<impl Fn(&[f64]) -> SignedLn + Sync> {
    variant.validate(p)?;
    let (a, b) = real_params(p)?;
    let (n, g) = (p.n, p.gamma);
    Ok(move |x: &[f64]| {
        let base = ln_vandermonde(x, g);
        match variant {
            SelbergVariant::UnitBox => {
                if x.iter().any(|&t| !(t > 0.0 && t < 1.0)) {
                    return SignedLn::ZERO;
                }
                SignedLn::positive(base + x.iter().map(|&t| (a - 1.0) * t.ln() + (b - 1.0) * (-t).ln_1p()).sum::<f64>())
            }
            SelbergVariant::Halfline => {
                if x.iter().any(|&t| !(t > 0.0)) {
                    return SignedLn::ZERO;
                }
                let e = -a - b - 2.0 * g * (n as f64 - 1.0);
                SignedLn::positive(base + x.iter().map(|&t| (a - 1.0) * t.ln() + e * t.ln_1p()).sum::<f64>())
            }
            SelbergVariant::Cauchy => {
                let mut l = base - n as f64 * (2.0 * PI).ln();
                let mut phase = 0.0;
                for &t in x {
                    l -= 0.5 * (a + b) * t.mul_add(t, 1.0).ln();
                    phase += (a - b) * t.atan();
                }
                SignedLn::re_exp(Complex64::new(l, phase))
            }
        }
    })
}

/// Quadrature over the ordered chamber x_2 < x_1, doubled (n ≤ 2).
pub fn selberg_quadrature(variant: SelbergVariant, p: &SelbergParams, opts: &QuadOptions) -> Result<QuadResult> {
    if p.n > 2 {
        return Err(Error::Unsupported(format!("Selberg quadrature at n = {} (supported: 1, 2)", p.n)));
    }
    let f = selberg_integrand(variant, p)?;
    let (lo, hi) = match variant {
        SelbergVariant::UnitBox => (0.0, 1.0),
        SelbergVariant::Halfline => (0.0, f64::INFINITY),
        SelbergVariant::Cauchy => (f64::NEG_INFINITY, f64::INFINITY),
    };
    let g = |x: &[f64]| f(x).value();
    let region = IteratedRegion::new(p.n, |level: usize, outer: &[f64]| if level == 0 { (lo, hi) } else { (lo, outer[0]) });
    let mut r = quad_adaptive(&g, &region, opts)?;
    if p.n == 2 {
        r.value *= 2.0;
        r.error *= 2.0;
    }
    Ok(r)
}

/// Importance-sampling estimate: uniform on the box, beta-prime coordinates
/// on the half-line, Cauchy coordinates on the line.
pub fn selberg_mc(variant: SelbergVariant, p: &SelbergParams, samples: u64, seed: u64) -> Result<MCEstimate> {
    let f = selberg_integrand(variant, p)?;
    let (a, b) = real_params(p)?;
    let proposal: Box<dyn Proposal> = match variant {
        SelbergVariant::UnitBox => Box::new(BoxUniform::new(vec![(0.0, 1.0); p.n])?),
        SelbergVariant::Halfline => {
            let parts = (0..p.n)
                .map(|_| {
                    let law = DiagonalLaw::BetaPrime { a: vec![a], b: vec![b] };
                    Ok(Box::new(GammaCone::new(Field::R, 1, law, OffDiagonalLaw::Normal { sd: 1.0 })?) as Box<dyn Proposal>)
                })
                .collect::<Result<Vec<_>>>()?;
            Box::new(ProductProposal::new(parts))
        }
        SelbergVariant::Cauchy => Box::new(CauchyProduct::uniform(p.n, 1.0)),
    };
    mc_integrate(f, proposal.as_ref(), samples, seed)
}
