use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::enumerate::enumerate_lattices;
use crate::special::riemann_zeta;

/// Exponents α_k, β_k of the lattice sum, with α_{n+1} = β_{n+1} = 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaParams {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl ZetaParams {
    /// Checks that the numerator zeta arguments lie where the Dirichlet
    /// series converges absolutely and the denominators avoid the pole.
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        let n = alpha.len();
        if n == 0 || beta.len() != n {
            return Err(Error::InvalidParameter(format!(
                "`α` and `β` must be non-empty and of equal length (got {} and {})",
                n,
                beta.len()
            )));
        }
        for j in 1..=n {
            let (a, b) = (alpha[j - 1], beta[j - 1]);
            let jf = j as f64;
            let nf = n as f64;
            let checks = [
                (format!("-(β_{j} + {})", j - 1), -(b + jf - 1.0)),
                (format!("α_{j} + β_{j} - n + {j}"), a + b - nf + jf),
            ];
            for (what, v) in checks {
                if !(v > 1.0) {
                    return Err(Error::domain(format!("{what} = {v} must exceed 1")));
                }
            }
            if a - nf + jf == 1.0 {
                return Err(Error::domain(format!("α_{j} - n + {j} = 1 is a pole of ζ")));
            }
        }
        Ok(Self { alpha, beta })
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }
}

/// ∏_j ζ(-(β_j+j-1)) ζ(α_j+β_j-n+j) / ζ(α_j-n+j).
pub fn zeta_rhs(p: &ZetaParams) -> Result<f64> {
    let n = p.n() as f64;
    let mut v = 1.0;
    for j in 1..=p.n() {
        let (a, b) = (p.alpha[j - 1], p.beta[j - 1]);
        let jf = j as f64;
        v *= riemann_zeta(-(b + jf - 1.0))? * riemann_zeta(a + b - n + jf)? / riemann_zeta(a - n + jf)?;
    }
    Ok(v)
}

/// Partial sums over the enumeration box at bound B and at B/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialSum {
    pub value: f64,
    pub half_value: f64,
    /// |S(B) - S(B/2)|, the doubling heuristic for the remaining tail.
    pub tail: f64,
    pub terms: u64,
    pub bound: u64,
}

fn telescoped(v: &[f64], k: usize) -> f64 {
    v[k] - v.get(k + 1).copied().unwrap_or(0.0)
}

/// Σ over lattices with D ≤ B and det H ≤ B of
/// ∏_k υ_k(S∩Q^k)^{-β_k+β_{k+1}} υ_k(S∩Z^k)^{-α_k+α_{k+1}}.
pub fn zeta_lhs_partial(p: &ZetaParams, bound: u64, cap: usize) -> Result<PartialSum> {
    let n = p.n();
    let lattices = enumerate_lattices(n, bound, cap)?.collect::<Result<Vec<_>>>()?;
    let half = bound / 2;
    let terms: Vec<(f64, bool)> = lattices
        .par_iter()
        .map(|s| {
            let mut l = 0.0;
            for (k, (lq, lz)) in s.flag_ln_covolumes().into_iter().enumerate() {
                l -= telescoped(&p.beta, k) * lq + telescoped(&p.alpha, k) * lz;
            }
            let inner = half > 0
                && s.denominator() <= &half.into()
                && s.det_h() <= half.into();
            (l.exp(), inner)
        })
        .collect();
    let value = pairwise(&terms.iter().map(|t| t.0).collect::<Vec<_>>());
    let half_value = pairwise(&terms.iter().filter(|t| t.1).map(|t| t.0).collect::<Vec<_>>());
    Ok(PartialSum { value, half_value, tail: (value - half_value).abs(), terms: terms.len() as u64, bound })
}

fn pairwise(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise(a) + pairwise(b)
}

/// Doubles B from `start` until the tail heuristic drops below
/// `rel_tol`·|S| or B would exceed `max_bound`.
pub fn zeta_lhs_converged(p: &ZetaParams, start: u64, max_bound: u64, rel_tol: f64, cap: usize) -> Result<PartialSum> {
    let mut b = start.max(2);
    loop {
        let s = zeta_lhs_partial(p, b, cap)?;
        if s.tail <= rel_tol * s.value.abs() {
            return Ok(s);
        }
        if b * 2 > max_bound {
            return Err(Error::Convergence { change: s.tail / s.value.abs(), tolerance: rel_tol });
        }
        b *= 2;
    }
}

/// Σ over sublattices S ⊆ Z^n of index ≤ B of ∏_k υ_k(S∩Z^k)^{-α_k+α_{k+1}}.
/// A sublattice's weight depends only on the diagonal of its HNF, and
/// diagonal (h_1,…,h_n) carries ∏_i h_i^{n-i} matrices.
pub fn tamagawa_partial(alpha: &[f64], bound: u64) -> Result<PartialSum> {
    let n = alpha.len();
    if n == 0 || n > 3 {
        return Err(Error::Unsupported(format!("Tamagawa sums in dimension {n} (supported: 1 to 3)")));
    }
    if bound == 0 {
        return Err(Error::InvalidParameter("bound must be at least 1".into()));
    }
    let half = bound / 2;
    let mut value = Vec::new();
    let mut half_value = Vec::new();
    let mut terms = 0u64;
    let mut diag = vec![1u64; n];
    // enumerate diagonals with product ≤ bound, last coordinate innermost
    fn walk(
        k: usize,
        prod: u64,
        diag: &mut Vec<u64>,
        bound: u64,
        visit: &mut dyn FnMut(&[u64], u64),
    ) {
        if k == diag.len() {
            visit(diag, prod);
            return;
        }
        let mut h = 1;
        while prod * h <= bound {
            diag[k] = h;
            walk(k + 1, prod * h, diag, bound, visit);
            h += 1;
        }
    }
    walk(0, 1, &mut diag, bound, &mut |d: &[u64], prod: u64| {
        let mut l = 0.0;
        let mut corner = 0.0;
        for (i, &h) in d.iter().enumerate() {
            let lh = (h as f64).ln();
            corner += lh;
            l += (n - 1 - i) as f64 * lh - telescoped(alpha, i) * corner;
        }
        let w = l.exp();
        value.push(w);
        if prod <= half {
            half_value.push(w);
        }
        terms += d.iter().enumerate().map(|(i, &h)| h.pow((n - 1 - i) as u32)).product::<u64>();
    });
    let value = pairwise(&value);
    let half_value = pairwise(&half_value);
    Ok(PartialSum { value, half_value, tail: (value - half_value).abs(), terms, bound })
}

/// The same sum by explicit enumeration of the sublattices (n ≤ 2).
pub fn tamagawa_by_enumeration(alpha: &[f64], bound: u64) -> Result<f64> {
    let n = alpha.len();
    let mut total = 0.0;
    for s in crate::lattice::enumerate::sublattices(n, bound)? {
        let mut l = 0.0;
        for (k, (_, lz)) in s.flag_ln_covolumes().into_iter().enumerate() {
            l -= telescoped(alpha, k) * lz;
        }
        total += l.exp();
    }
    Ok(total)
}
