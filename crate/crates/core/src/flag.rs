//! Beta integrals over the flag chart Triang_n(K) of unit upper-triangular
//! matrices, and the pushforward under forgetting the last column.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::algebra::{gram_det, Field, MatK, Quaternion};
use crate::error::{Error, Result};
use crate::integrate::{
    mc_integrate, quad_1d, quad_adaptive, CauchyProduct, IteratedRegion, MCEstimate, QuadOptions,
    QuadResult, SignedLn,
};
use crate::special::GammaProduct;

/// Note on the power of π in front of the flag product.
pub const FLAG_NOTE: &str = "constant: π^{n(n-1)d/4} used; the published form has π^{n(n-1)/4}";

/// Note on the pushforward constant.
pub const FLAG_PROJECTIVITY_NOTE: &str =
    "denominator Γ(Σλ-(n-p-1)d/2) used; the published form has Γ(Σλ-(n-p+1)d/2)";

/// A unit upper-triangular matrix, stored by its strictly upper entries in
/// row-major order, each as `field.dim()` real coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangMat {
    field: Field,
    n: usize,
    coords: Vec<f64>,
}

/// Number of real coordinates of Triang_n(K).
pub fn triang_dim(field: Field, n: usize) -> usize {
    field.dim() * n * n.saturating_sub(1) / 2
}

impl TriangMat {
    pub fn new(field: Field, n: usize, coords: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if coords.len() != triang_dim(field, n) {
            return Err(Error::InvalidParameter(format!(
                "Triang_{n}({field}) has {} real coordinates, got {}",
                triang_dim(field, n),
                coords.len()
            )));
        }
        Ok(Self { field, n, coords })
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Self { field, n, coords: vec![0.0; triang_dim(field, n)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn to_matrix(&self) -> MatK {
        triang_matrix(self.field, self.n, &self.coords)
    }

    /// s_pq(Z) = det([Z]_pq [Z]_pq*), 1 ≤ p ≤ q ≤ n.
    pub fn s(&self, p: usize, q: usize) -> Result<f64> {
        if p == 0 || p > q || q > self.n {
            return Err(Error::Bounds(format!("s_{{{p}{q}}} needs 1 ≤ p ≤ q ≤ {}", self.n)));
        }
        Ok(gram_det(&self.to_matrix().corner(p, q)?))
    }
}

fn triang_matrix(field: Field, n: usize, coords: &[f64]) -> MatK {
    let d = field.dim();
    let mut m = MatK::identity(field, n);
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            m.set_unchecked(i, j, Quaternion::from_slice(&coords[k..k + d]));
            k += d;
        }
    }
    m
}

/// Reading of the index pair in the ν exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexConvention {
    /// λ_{mk} in the sum is the exponent attached to s_{km}.
    #[default]
    Standard,
    /// λ_{mk} is read through the anti-diagonal reflection, as the exponent
    /// of s_{n+1-m, n+1-k}.
    Reflected,
}

/// Exponents λ_pq of s_pq for 1 ≤ p < q ≤ n, stored row-major over pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlagExponents {
    n: usize,
    values: Vec<f64>,
}

fn pair_index(n: usize, p: usize, q: usize) -> usize {
    // pairs (1,2), (1,3), ..., (1,n), (2,3), ...
    (p - 1) * n - (p - 1) * p / 2 + (q - p - 1)
}

impl FlagExponents {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        let len = n * n.saturating_sub(1) / 2;
        if n < 2 || values.len() != len {
            return Err(Error::InvalidParameter(format!(
                "n = {n} needs {len} exponents (n ≥ 2), got {}",
                values.len()
            )));
        }
        Ok(Self { n, values })
    }

    pub fn constant(n: usize, l: f64) -> Result<Self> {
        Self::new(n, vec![l; n * n.saturating_sub(1) / 2])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// λ_pq, 1 ≤ p < q ≤ n.
    pub fn get(&self, p: usize, q: usize) -> f64 {
        self.values[pair_index(self.n, p, q)]
    }

    pub fn set(&mut self, p: usize, q: usize, v: f64) {
        let i = pair_index(self.n, p, q);
        self.values[i] = v;
    }
}

/// ν_pq = -(q-p-1)d/2 + Σ_{p≤k<q, q≤m≤n} λ_{mk} under the given reading.
pub fn nu_pq(lambda: &FlagExponents, d: f64, p: usize, q: usize, conv: IndexConvention) -> f64 {
    let n = lambda.n();
    let mut s = -0.5 * (q - p - 1) as f64 * d;
    for k in p..q {
        for m in q..=n {
            s += match conv {
                IndexConvention::Standard => lambda.get(k, m),
                IndexConvention::Reflected => lambda.get(n + 1 - m, n + 1 - k),
            };
        }
    }
    s
}

/// π^{n(n-1)d/4} ∏_{p<q} Γ(ν_pq - d/2) / Γ(ν_pq).
pub fn flag_rhs_with(lambda: &FlagExponents, field: Field, conv: IndexConvention) -> Result<f64> {
    let n = lambda.n();
    let d = field.d();
    let mut g = GammaProduct::one().pow(PI, (n * (n - 1)) as f64 * d / 4.0);
    for p in 1..n {
        for q in (p + 1)..=n {
            let nu = nu_pq(lambda, d, p, q, conv);
            if !(nu - 0.5 * d > 0.0) {
                return Err(Error::domain(format!(
                    "ν_{{{p}{q}}} - d/2 = {} must be positive",
                    nu - 0.5 * d
                )));
            }
            g = g.gamma(nu - 0.5 * d)?.inv_gamma(nu)?;
        }
    }
    Ok(g.real())
}

pub fn flag_rhs(lambda: &FlagExponents, field: Field) -> Result<f64> {
    flag_rhs_with(lambda, field, IndexConvention::Standard)
}

/// ∏_{p<q} s_pq(Z)^{-λ_pq} on Triang_n(K) coordinates.
pub fn flag_integrand(field: Field, lambda: FlagExponents) -> impl Fn(&[f64]) -> SignedLn + Sync {
    let n = lambda.n();
    move |x: &[f64]| {
        let z = triang_matrix(field, n, x);
        let mut l = 0.0;
        for p in 1..n {
            for q in (p + 1)..=n {
                let e = lambda.get(p, q);
                if e != 0.0 {
                    let c = z.corner(p, q).expect("in range");
                    l -= e * gram_det(&c).ln();
                }
            }
        }
        SignedLn::positive(l)
    }
}

/// Quadrature over Triang_n(K) when it has at most four real coordinates.
pub fn flag_quadrature(lambda: &FlagExponents, field: Field, opts: &QuadOptions) -> Result<QuadResult> {
    flag_rhs(lambda, field)?;
    let dim = triang_dim(field, lambda.n());
    if dim > 4 {
        return Err(Error::Unsupported(format!("quadrature in {dim} dimensions")));
    }
    let g = flag_integrand(field, lambda.clone());
    let f = |x: &[f64]| g(x).value();
    let region = IteratedRegion::new(dim, |_, _: &[f64]| (f64::NEG_INFINITY, f64::INFINITY));
    quad_adaptive(&f, &region, opts)
}

pub fn flag_mc(lambda: &FlagExponents, field: Field, samples: u64, seed: u64) -> Result<MCEstimate> {
    flag_rhs(lambda, field)?;
    let dim = triang_dim(field, lambda.n());
    mc_integrate(flag_integrand(field, lambda.clone()), &CauchyProduct::uniform(dim, 1.0), samples, seed)
}

fn check_projectivity(lambda: &[f64], d: f64, n: usize) -> Result<()> {
    if n < 2 || lambda.len() != n - 1 {
        return Err(Error::InvalidParameter(format!(
            "n = {n} needs n-1 = {} exponents, got {}",
            n.saturating_sub(1),
            lambda.len()
        )));
    }
    for p in 1..n {
        let tail: f64 = lambda[p - 1..].iter().sum();
        let bound = 0.5 * (n - p) as f64 * d;
        if !(tail > bound) {
            return Err(Error::domain(format!(
                "λ_{p} + … + λ_{} = {tail} must exceed {bound}",
                n - 1
            )));
        }
    }
    Ok(())
}

fn projectivity_product(lambda: &[f64], field: Field, n: usize, shift: f64) -> Result<f64> {
    let d = field.d();
    check_projectivity(lambda, d, n)?;
    let mut g = GammaProduct::one().pow(PI, (n - 1) as f64 * d / 2.0);
    for p in 1..n {
        let tail: f64 = lambda[p - 1..].iter().sum();
        g = g
            .gamma(tail - 0.5 * (n - p) as f64 * d)?
            .inv_gamma(tail - 0.5 * ((n - p) as f64 + shift) * d)?;
    }
    Ok(g.real())
}

/// π^{(n-1)d/2} ∏_p Γ(Σ_{k≥p} λ_k - (n-p)d/2) / Γ(Σ_{k≥p} λ_k - (n-p-1)d/2).
pub fn flag_projectivity_constant(lambda: &[f64], field: Field, n: usize) -> Result<f64> {
    projectivity_product(lambda, field, n, -1.0)
}

/// The constant with the published denominator Γ(Σλ - (n-p+1)d/2).
pub fn flag_projectivity_published(lambda: &[f64], field: Field, n: usize) -> Result<f64> {
    projectivity_product(lambda, field, n, 1.0)
}

/// Test functions of z_12 for the pushforward check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PushforwardTest {
    One,
    Lorentz,
    Odd,
    Shifted,
    Bump,
}

impl PushforwardTest {
    pub const ALL: [PushforwardTest; 5] = [
        PushforwardTest::One,
        PushforwardTest::Lorentz,
        PushforwardTest::Odd,
        PushforwardTest::Shifted,
        PushforwardTest::Bump,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PushforwardTest::One => "one",
            PushforwardTest::Lorentz => "lorentz",
            PushforwardTest::Odd => "odd",
            PushforwardTest::Shifted => "shifted",
            PushforwardTest::Bump => "bump",
        }
    }

    pub fn eval(self, z: f64) -> f64 {
        match self {
            PushforwardTest::One => 1.0,
            PushforwardTest::Lorentz => 1.0 / (1.0 + z * z),
            PushforwardTest::Odd => z / (1.0 + z.powi(4)),
            PushforwardTest::Shifted => 1.0 / (1.0 + (z - 1.0) * (z - 1.0)),
            PushforwardTest::Bump => (-z * z).exp(),
        }
    }
}

/// Result of comparing the weighted Triang_3(R) integral with its claimed
/// pushforward to Triang_2(R).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PushforwardCheck {
    pub lhs: MCEstimate,
    pub rhs: f64,
    pub rhs_error: f64,
}

/// ∫ g(z_12) s_13^{-λ_1} s_23^{-λ_2} dZ by Monte Carlo against
/// c·∫ g(z) (1+z²)^{-λ_1} dz by quadrature, over K = R at n = 3.
pub fn flag_pushforward_check(
    lambda: [f64; 2],
    test: PushforwardTest,
    samples: u64,
    seed: u64,
) -> Result<PushforwardCheck> {
    let c = flag_projectivity_constant(&lambda, Field::R, 3)?;
    let q = quad_1d(
        |z| test.eval(z) * (1.0 + z * z).powf(-lambda[0]),
        f64::NEG_INFINITY,
        f64::INFINITY,
        &QuadOptions::default().with_rel_tol(1e-10).with_abs_tol(1e-14),
    )?;
    let mut ex = FlagExponents::new(3, vec![0.0; 3])?;
    ex.set(1, 3, lambda[0]);
    ex.set(2, 3, lambda[1]);
    let base = flag_integrand(Field::R, ex);
    let f = move |x: &[f64]| {
        let g = test.eval(x[0]);
        let b = base(x);
        if g == 0.0 || b.sign == 0.0 {
            SignedLn::ZERO
        } else {
            SignedLn { sign: g.signum(), ln_abs: b.ln_abs + g.abs().ln() }
        }
    };
    let lhs = mc_integrate(f, &CauchyProduct::uniform(3, 1.0), samples, seed)?;
    Ok(PushforwardCheck { lhs, rhs: c * q.value, rhs_error: c * q.error })
}
