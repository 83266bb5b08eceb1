use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use rand_distr::{Beta, Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::algebra::{cholesky_upper, hermitian_coords, operator_norm, Field, MatK};
use crate::error::{Error, Result};
use crate::integrate::mc::McRng;
use crate::special::ln_gamma_real;

/// Sampler families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProposalKind {
    CauchyProduct,
    BorderedCauchy,
    GammaCone,
    BallRejection,
    BoxUniform,
    InterlacingSequential,
    Product,
}

impl fmt::Display for ProposalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProposalKind::CauchyProduct => "cauchy-product",
            ProposalKind::BorderedCauchy => "bordered-cauchy",
            ProposalKind::GammaCone => "gamma-cone",
            ProposalKind::BallRejection => "ball-rejection",
            ProposalKind::BoxUniform => "box-uniform",
            ProposalKind::InterlacingSequential => "interlacing-sequential",
            ProposalKind::Product => "product",
        };
        f.write_str(s)
    }
}

/// A sampling density on R^dim.
pub trait Proposal: Sync + Send {
    fn dim(&self) -> usize;
    fn kind(&self) -> ProposalKind;
    /// Write one draw into `x` and return its log-density, or return None for
    /// a rejected draw (which still counts as a sample with weight zero).
    fn draw(&self, rng: &mut McRng, x: &mut [f64]) -> Option<f64>;
    /// Log-density at `x`; -∞ outside the support.
    fn ln_density(&self, x: &[f64]) -> f64;
}

fn lgamma(x: f64) -> f64 {
    ln_gamma_real(x).expect("positive argument").re
}

fn positive(name: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {x}")))
    }
}

/// Independent Cauchy(0, s_k) coordinates; with `folded` the absolute
/// values, supported on (0, ∞)^dim.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyProduct {
    scales: Vec<f64>,
    folded: bool,
}

impl CauchyProduct {
    pub fn new(scales: Vec<f64>) -> Self {
        assert!(scales.iter().all(|&s| s > 0.0), "Cauchy scales must be positive");
        Self { scales, folded: false }
    }

    pub fn folded(scales: Vec<f64>) -> Self {
        Self { folded: true, ..Self::new(scales) }
    }

    pub fn uniform(dim: usize, scale: f64) -> Self {
        Self::new(vec![scale; dim])
    }

    fn ln_one(&self, s: f64, x: f64) -> f64 {
        let u = x / s;
        let base = -(PI * s).ln() - (u * u).ln_1p();
        if self.folded {
            base + std::f64::consts::LN_2
        } else {
            base
        }
    }
}

impl Proposal for CauchyProduct {
    fn dim(&self) -> usize {
        self.scales.len()
    }
    fn kind(&self) -> ProposalKind {
        ProposalKind::CauchyProduct
    }
    fn draw(&self, rng: &mut McRng, x: &mut [f64]) -> Option<f64> {
        let mut ln_q = 0.0;
        for (xi, &s) in x.iter_mut().zip(&self.scales) {
            let u: f64 = rng.random();
            let mut v = s * (PI * (u - 0.5)).tan();
            if self.folded {
                v = v.abs();
            }
            *xi = v;
            ln_q += self.ln_one(s, v);
        }
        Some(ln_q)
    }
    fn ln_density(&self, x: &[f64]) -> f64 {
        if self.folded && x.iter().any(|&v| v < 0.0) {
            return f64::NEG_INFINITY;
        }
        x.iter().zip(&self.scales).map(|(&v, &s)| self.ln_one(s, v)).sum()
    }
}

/// Uniform density on a box.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxUniform {
    bounds: Vec<(f64, f64)>,
    ln_volume: f64,
}

impl BoxUniform {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.iter().any(|&(a, b)| !(b > a) || !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidParameter("box bounds must be finite with a < b".into()));
        }
        let ln_volume = bounds.iter().map(|&(a, b)| (b - a).ln()).sum();
        Ok(Self { bounds, ln_volume })
    }
}

impl Proposal for BoxUniform {
    fn dim(&self) -> usize {
        self.bounds.len()
    }
    fn kind(&self) -> ProposalKind {
        ProposalKind::BoxUniform
    }
    fn draw(&self, rng: &mut McRng, x: &mut [f64]) -> Option<f64> {
        for (xi, &(a, b)) in x.iter_mut().zip(&self.bounds) {
            let u: f64 = rng.random();
            *xi = a + (b - a) * u;
        }
        Some(-self.ln_volume)
    }
    fn ln_density(&self, x: &[f64]) -> f64 {
        if x.iter().zip(&self.bounds).all(|(&v, &(a, b))| v >= a && v <= b) {
            -self.ln_volume
        } else {
            f64::NEG_INFINITY
        }
    }
}

/// Uniform draw from the Frobenius ball of radius √min(p, q) in the p×q
/// matrices over a field, rejected unless the operator norm is below 1. The
/// Frobenius ball contains the operator-norm ball.
#[derive(Debug, Clone, PartialEq)]
pub struct BallRejection {
    field: Field,
    p: usize,
    q: usize,
    ln_volume: f64,
}

impl BallRejection {
    pub const MAX_DIM: usize = 8;

    pub fn new(field: Field, p: usize, q: usize) -> Result<Self> {
        let dim = field.dim() * p * q;
        if dim == 0 {
            return Err(Error::InvalidParameter("empty matrix ball".into()));
        }
        if dim > Self::MAX_DIM {
            return Err(Error::Unsupported(format!(
                "ball rejection in {dim} real dimensions (limit {})",
                Self::MAX_DIM
            )));
        }
        let dd = dim as f64;
        let r = (p.min(q) as f64).sqrt();
        let ln_volume = 0.5 * dd * PI.ln() - lgamma(0.5 * dd + 1.0) + dd * r.ln();
        Ok(Self { field, p, q, ln_volume })
    }

    pub fn matrix(&self, x: &[f64]) -> MatK {
        MatK::from_coords(self.field, self.p, self.q, x)
    }
}

impl Proposal for BallRejection {
    fn dim(&self) -> usize {
        self.field.dim() * self.p * self.q
    }
    fn kind(&self) -> ProposalKind {
        ProposalKind::BallRejection
    }
    fn draw(&self, rng: &mut McRng, x: &mut [f64]) -> Option<f64> {
        let dim = x.len();
        let mut norm2 = 0.0;
        for xi in x.iter_mut() {
            let g: f64 = StandardNormal.sample(rng);
            *xi = g;
            norm2 += g * g;
        }
        let u: f64 = rng.random();
        let radius = (self.p.min(self.q) as f64).sqrt() * u.powf(1.0 / dim as f64);
        let s = radius / norm2.sqrt();
        x.iter_mut().for_each(|v| *v *= s);
        if operator_norm(&self.matrix(x)) < 1.0 {
            Some(-self.ln_volume)
        } else {
            None
        }
    }
    fn ln_density(&self, x: &[f64]) -> f64 {
        if operator_norm(&self.matrix(x)) < 1.0 {
            -self.ln_volume
        } else {
            f64::NEG_INFINITY
        }
    }
}

/// Law of the squared diagonal entries s_ii² in the cone sampler.
#[derive(Debug, Clone, PartialEq)]
pub enum DiagonalLaw {
    /// Gamma(shape_i, scale).
    Gamma { shapes: Vec<f64>, scale: f64 },
    /// Beta-prime(a_i, b_i), density g^{a-1}(1+g)^{-a-b}/B(a,b); polynomial tails.
    BetaPrime { a: Vec<f64>, b: Vec<f64> },
}

/// Law of each real component of the entries above the diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OffDiagonalLaw {
    Normal { sd: f64 },
    Cauchy { scale: f64 },
}

/// Positive definite Hermitian matrices X = S*S with S upper triangular,
/// emitted in `hermitian_coords` order. The density includes the Jacobian
/// dX = 2^n ∏ s_ii^{d(n-i)+1} dS.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaCone {
    field: Field,
    n: usize,
    diag: DiagonalLaw,
    off: OffDiagonalLaw,
    diag_const: Vec<f64>,
}

impl GammaCone {
    pub fn new(field: Field, n: usize, diag: DiagonalLaw, off: OffDiagonalLaw) -> Result<Self> {
        let diag_const = match &diag {
            DiagonalLaw::Gamma { shapes, scale } => {
                if shapes.len() != n {
                    return Err(Error::InvalidParameter("one gamma shape per diagonal entry".into()));
                }
                positive("gamma scale", *scale)?;
                shapes
                    .iter()
                    .map(|&k| Ok(-lgamma(positive("gamma shape", k)?) - k * scale.ln()))
                    .collect::<Result<Vec<_>>>()?
            }
            DiagonalLaw::BetaPrime { a, b } => {
                if a.len() != n || b.len() != n {
                    return Err(Error::InvalidParameter(
                        "one beta-prime pair per diagonal entry".into(),
                    ));
                }
                a.iter()
                    .zip(b)
                    .map(|(&a, &b)| {
                        positive("beta-prime a", a)?;
                        positive("beta-prime b", b)?;
                        Ok(lgamma(a + b) - lgamma(a) - lgamma(b))
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        match off {
            OffDiagonalLaw::Normal { sd } => positive("normal sd", sd)?,
            OffDiagonalLaw::Cauchy { scale } => positive("Cauchy scale", scale)?,
        };
        Ok(Self { field, n, diag, off, diag_const })
    }

    /// Gamma diagonal with unit scale and normal off-diagonal entries.
    pub fn gamma(field: Field, n: usize, shapes: Vec<f64>, sd: f64) -> Result<Self> {
        Self::new(
            field,
            n,
            DiagonalLaw::Gamma { shapes, scale: 1.0 },
            OffDiagonalLaw::Normal { sd },
        )
    }

    fn ln_diag(&self, i: usize, g: f64) -> f64 {
        match &self.diag {
            DiagonalLaw::Gamma { shapes, scale } => {
                self.diag_const[i] + (shapes[i] - 1.0) * g.ln() - g / scale
            }
            DiagonalLaw::BetaPrime { a, b } => {
                self.diag_const[i] + (a[i] - 1.0) * g.ln() - (a[i] + b[i]) * g.ln_1p()
            }
        }
    }

    fn ln_off(&self, v: f64) -> f64 {
        match self.off {
            OffDiagonalLaw::Normal { sd } => {
                -0.5 * (2.0 * PI).ln() - sd.ln() - 0.5 * (v / sd) * (v / sd)
            }
            OffDiagonalLaw::Cauchy { scale } => {
                let u = v / scale;
                -(PI * scale).ln() - (u * u).ln_1p()
            }
        }
    }

    /// log density of S in its own coordinates, minus log Jacobian of S ↦ X.
    fn ln_density_of_factor(&self, s: &MatK) -> f64 {
        let d = self.field.dim();
        let n = self.n;
        let mut l = 0.0;
        for i in 0..n {
            let sii = s.get(i, i).w;
            // g = s², dg = 2s ds
            l += self.ln_diag(i, sii * sii) + (2.0 * sii).ln();
            let power = (d * (n - 1 - i) + 1) as f64;
            l -= std::f64::consts::LN_2 + power * sii.ln();
            for j in (i + 1)..n {
                for v in self.field.coords(s.get(i, j)) {
                    l += self.ln_off(v);
                }
            }
        }
        l
    }
}

impl Proposal for GammaCone {
    fn dim(&self) -> usize {
        hermitian_coords::dim(self.field, self.n)
    }
    fn kind(&self) -> ProposalKind {
        ProposalKind::GammaCone
    }
    fn draw(&self, rng: &mut McRng, x: &mut [f64]) -> Option<f64> {
        let n = self.n;
        let d = self.field.dim();
        let mut s = MatK::zeros(self.field, n, n);
        for i in 0..n {
            let g: f64 = match &self.diag {
                DiagonalLaw::Gamma { shapes, scale } => {
                    Gamma::new(shapes[i], *scale).expect("validated").sample(rng)
                }
                DiagonalLaw::BetaPrime { a, b } => {
                    let u: f64 = Gamma::new(a[i], 1.0).expect("validated").sample(rng);
                    let v: f64 = Gamma::new(b[i], 1.0).expect("validated").sample(rng);
                    u / v
                }
            };
            s.set_unchecked(i, i, crate::Quaternion::real(g.sqrt()));
            for j in (i + 1)..n {
                let mut c = [0.0; 4];
                for v in c.iter_mut().take(d) {
                    *v = match self.off {
                        OffDiagonalLaw::Normal { sd } => {
                            sd * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng)
                        }
                        OffDiagonalLaw::Cauchy { scale } => {
                            let u: f64 = rng.random();
                            scale * (PI * (u - 0.5)).tan()
                        }
                    };
                }
                s.set_unchecked(i, j, crate::Quaternion::from_slice(&c[..d]));
            }
        }
        if (0..n).any(|i| !(s.get(i, i).w > 0.0)) {
            return None;
        }
        let xm = &s.adjoint() * &s;
        x.copy_from_slice(&hermitian_coords::from_matrix(&xm));
        Some(self.ln_density_of_factor(&s))
    }
    fn ln_density(&self, x: &[f64]) -> f64 {
        let xm = hermitian_coords::to_matrix(self.field, self.n, x);
        match cholesky_upper(&xm) {
            Some(s) => self.ln_density_of_factor(&s),
            None => f64::NEG_INFINITY,
        }
    }
}

/// Triangular tables λ_{jα} (1 ≤ α ≤ j ≤ n), flattened row by row with each
/// row ascending. The top row is a sorted sample of n independent Cauchy
/// variables; each lower entry is drawn on its interlacing interval
/// [λ_{j+1,α}, λ_{j+1,α+1}] as a + (b-a)·Beta(κ, κ).
#[derive(Debug, Clone, PartialEq)]
pub struct InterlacingSequential {
    n: usize,
    scale: f64,
    kappa: Vec<f64>,
    beta_const: Vec<f64>,
}

/// Offset of row j (1-based) in the flattened table.
pub fn table_offset(j: usize) -> usize {
    j * (j - 1) / 2
}

impl InterlacingSequential {
    /// `kappa` has one entry per interior position, in flattened order of rows
    /// 1..n-1; a single entry is broadcast.
    pub fn new(n: usize, scale: f64, kappa: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("table size must be at least 1".into()));
        }
        positive("Cauchy scale", scale)?;
        let interior = n * (n - 1) / 2;
        let kappa = match kappa.len() {
            1 => vec![kappa[0]; interior],
            k if k == interior => kappa,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "need 1 or {interior} Beta parameters"
                )))
            }
        };
        let beta_const = kappa
            .iter()
            .map(|&k| Ok(lgamma(2.0 * positive("Beta parameter", k)?) - 2.0 * lgamma(k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, scale, kappa, beta_const })
    }

    pub fn uniform(n: usize, scale: f64) -> Result<Self> {
        Self::new(n, scale, vec![1.0])
    }

    fn ln_cauchy(&self, v: f64) -> f64 {
        let u = v / self.scale;
        -(PI * self.scale).ln() - (u * u).ln_1p()
    }

    fn ln_top(&self, top: &[f64]) -> f64 {
        let ln_fact: f64 = (2..=self.n).map(|k| (k as f64).ln()).sum();
        ln_fact + top.iter().map(|&v| self.ln_cauchy(v)).sum::<f64>()
    }

    fn ln_inner(&self, k: usize, a: f64, b: f64, v: f64) -> f64 {
        let w = b - a;
        let u = (v - a) / w;
        if !(u > 0.0 && u < 1.0) {
            return f64::NEG_INFINITY;
        }
        let kk = self.kappa[k];
        self.beta_const[k] + (kk - 1.0) * (u.ln() + (1.0 - u).ln()) - w.ln()
    }
}

impl Proposal for InterlacingSequential {
    fn dim(&self) -> usize {
        self.n * (self.n + 1) / 2
    }
    fn kind(&self) -> ProposalKind {
        ProposalKind::InterlacingSequential
    }
    fn draw(&self, rng: &mut McRng, x: &mut [f64]) -> Option<f64> {
        let n = self.n;
        let top = table_offset(n);
        for v in x[top..].iter_mut() {
            let u: f64 = rng.random();
            *v = self.scale * (PI * (u - 0.5)).tan();
        }
        x[top..].sort_by(|a, b| a.total_cmp(b));
        let mut ln_q = self.ln_top(&x[top..]);
        for j in (1..n).rev() {
            let (row, next) = (table_offset(j), table_offset(j + 1));
            for a in 0..j {
                let (lo, hi) = (x[next + a], x[next + a + 1]);
                let k = row + a;
                let u: f64 = if self.kappa[k] == 1.0 {
                    rng.random()
                } else {
                    Beta::new(self.kappa[k], self.kappa[k]).expect("validated").sample(rng)
                };
                let v = lo + (hi - lo) * u;
                x[k] = v;
                ln_q += self.ln_inner(k, lo, hi, v);
            }
        }
        if ln_q.is_finite() {
            Some(ln_q)
        } else {
            None
        }
    }
    fn ln_density(&self, x: &[f64]) -> f64 {
        let n = self.n;
        let top = &x[table_offset(n)..];
        if top.windows(2).any(|w| !(w[0] < w[1])) {
            return f64::NEG_INFINITY;
        }
        let mut l = self.ln_top(top);
        for j in (1..n).rev() {
            let (row, next) = (table_offset(j), table_offset(j + 1));
            for a in 0..j {
                l += self.ln_inner(row + a, x[next + a], x[next + a + 1], x[row + a]);
            }
        }
        l
    }
}

/// Independent blocks concatenated.
pub struct ProductProposal {
    parts: Vec<Box<dyn Proposal>>,
}

impl ProductProposal {
    pub fn new(parts: Vec<Box<dyn Proposal>>) -> Self {
        Self { parts }
    }
}

impl Proposal for ProductProposal {
    fn dim(&self) -> usize {
        self.parts.iter().map(|p| p.dim()).sum()
    }
    fn kind(&self) -> ProposalKind {
        ProposalKind::Product
    }
    fn draw(&self, rng: &mut McRng, x: &mut [f64]) -> Option<f64> {
        let mut ln_q = 0.0;
        let mut at = 0;
        let mut rejected = false;
        for p in &self.parts {
            let d = p.dim();
            match p.draw(rng, &mut x[at..at + d]) {
                Some(l) => ln_q += l,
                None => rejected = true,
            }
            at += d;
        }
        if rejected {
            None
        } else {
            Some(ln_q)
        }
    }
    fn ln_density(&self, x: &[f64]) -> f64 {
        let mut at = 0;
        let mut l = 0.0;
        for p in &self.parts {
            let d = p.dim();
            l += p.ln_density(&x[at..at + d]);
            at += d;
        }
        l
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::mc::chunk_rng;

    fn check_density_matches_draw(p: &dyn Proposal, draws: usize) {
        let mut rng = chunk_rng(9, 0);
        let mut x = vec![0.0; p.dim()];
        for _ in 0..draws {
            if let Some(l) = p.draw(&mut rng, &mut x) {
                let m = p.ln_density(&x);
                assert!((l - m).abs() < 1e-9 * l.abs().max(1.0), "{l} vs {m} at {x:?}");
            }
        }
    }

    #[test]
    fn cauchy_density_analytic() {
        let p = CauchyProduct::new(vec![2.0]);
        let l = p.ln_density(&[1.0]);
        let exact = (1.0 / (PI * 2.0 * (1.0 + 0.25))).ln();
        assert!((l - exact).abs() < 1e-14);
        check_density_matches_draw(&CauchyProduct::folded(vec![1.0, 3.0]), 200);
    }

    #[test]
    fn cone_density_consistent() {
        for field in Field::ALL {
            let p = GammaCone::gamma(field, 3, vec![2.0, 3.0, 4.0], 0.8).unwrap();
            check_density_matches_draw(&p, 200);
            let q = GammaCone::new(
                field,
                2,
                DiagonalLaw::BetaPrime { a: vec![2.0, 1.5], b: vec![1.0, 2.0] },
                OffDiagonalLaw::Cauchy { scale: 1.0 },
            )
            .unwrap();
            check_density_matches_draw(&q, 200);
        }
    }

    #[test]
    fn ball_rejection_stays_inside() {
        let p = BallRejection::new(Field::C, 2, 2).unwrap();
        let mut rng = chunk_rng(1, 0);
        let mut x = vec![0.0; p.dim()];
        let mut accepted = 0;
        for _ in 0..2000 {
            if p.draw(&mut rng, &mut x).is_some() {
                accepted += 1;
                assert!(operator_norm(&p.matrix(&x)) < 1.0);
            }
        }
        assert!(accepted > 0);
        assert!(BallRejection::new(Field::C, 3, 2).is_err());
    }

    #[test]
    fn tables_interlace() {
        let p = InterlacingSequential::new(4, 1.0, vec![0.7]).unwrap();
        let mut rng = chunk_rng(2, 0);
        let mut x = vec![0.0; p.dim()];
        for _ in 0..1000 {
            p.draw(&mut rng, &mut x).unwrap();
            for j in 1..4 {
                let (row, next) = (table_offset(j), table_offset(j + 1));
                for a in 0..j {
                    assert!(x[next + a] <= x[row + a] && x[row + a] <= x[next + a + 1]);
                }
            }
        }
        check_density_matches_draw(&p, 200);
    }
}
