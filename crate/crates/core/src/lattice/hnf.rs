use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A full-rank lattice (1/D)·H·Z^n in Q^n. The basis vectors are the columns
/// of the upper-triangular H; each entry above the diagonal lies in
/// [0, h_ii) for the diagonal entry h_ii of its row, and
/// gcd(D, entries of H) = 1, so every lattice has exactly one representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalLattice {
    denominator: BigInt,
    /// Row-major n×n.
    h: Vec<BigInt>,
    n: usize,
}

/// Which coordinate flag to intersect with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    /// S ∩ Q^k
    Rational,
    /// S ∩ Z^k
    Integral,
}

/// Column-style Hermite normal form of the lattice spanned by the columns
/// of an n×m integer matrix (row-major). Fails if the columns do not span
/// a rank-n lattice.
pub fn hermite_normal_form(n: usize, m: usize, a: &[BigInt]) -> Result<Vec<BigInt>> {
    let mut cols: Vec<Vec<BigInt>> = (0..m).map(|j| (0..n).map(|i| a[i * m + j].clone()).collect()).collect();
    let mut basis: Vec<Option<Vec<BigInt>>> = vec![None; n];
    for i in (0..n).rev() {
        // fold every remaining column into one pivot with a nonzero entry in row i
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::with_capacity(cols.len());
        for c in cols.drain(..) {
            if c[i].is_zero() {
                rest.push(c);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(c),
                Some(p) => {
                    let e = p[i].extended_gcd(&c[i]);
                    let (u, v) = (e.x, e.y);
                    let (pa, ca) = (&p[i] / &e.gcd, &c[i] / &e.gcd);
                    let new_p: Vec<BigInt> = p.iter().zip(&c).map(|(x, y)| &u * x + &v * y).collect();
                    let new_c: Vec<BigInt> = p.iter().zip(&c).map(|(x, y)| &ca * x - &pa * y).collect();
                    pivot = Some(new_p);
                    rest.push(new_c);
                }
            }
        }
        cols = rest;
        let Some(mut p) = pivot else {
            return Err(Error::Singular("generators do not span a full-rank lattice".into()));
        };
        if p[i].is_negative() {
            for x in p.iter_mut() {
                *x = -&*x;
            }
        }
        basis[i] = Some(p);
    }
    let mut h: Vec<Vec<BigInt>> = basis.into_iter().map(|c| c.expect("filled")).collect();
    for j in 0..n {
        for i in (0..j).rev() {
            let q = h[j][i].div_floor(&h[i][i]);
            if !q.is_zero() {
                let ci = h[i].clone();
                for (x, y) in h[j].iter_mut().zip(&ci) {
                    *x -= &q * y;
                }
            }
        }
    }
    Ok((0..n * n).map(|k| h[k % n][k / n].clone()).collect())
}

fn rational_lcm_denominator(v: &[BigRational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

impl RationalLattice {
    /// Canonical form of (1/D)·H for an upper-triangular HNF matrix H.
    fn canonical(n: usize, denominator: BigInt, mut h: Vec<BigInt>) -> Self {
        let mut g = denominator.clone();
        for x in &h {
            g = g.gcd(x);
        }
        let (denominator, h) = if g.is_one() {
            (denominator, h)
        } else {
            for x in h.iter_mut() {
                *x = &*x / &g;
            }
            (denominator / &g, h)
        };
        Self { denominator, h, n }
    }

    /// Builds a lattice from (D, H), validating the normal form.
    pub fn new(denominator: BigInt, n: usize, h: Vec<BigInt>) -> Result<Self> {
        if n == 0 || h.len() != n * n {
            return Err(Error::InvalidParameter(format!("H must be {n}×{n}")));
        }
        if !denominator.is_positive() {
            return Err(Error::InvalidParameter("denominator must be positive".into()));
        }
        for i in 0..n {
            if !h[i * n + i].is_positive() {
                return Err(Error::InvalidParameter("diagonal of H must be positive".into()));
            }
            for j in 0..n {
                let x = &h[i * n + j];
                if j < i && !x.is_zero() {
                    return Err(Error::InvalidParameter("H must be upper triangular".into()));
                }
                if j > i && (x.is_negative() || x >= &h[i * n + i]) {
                    return Err(Error::InvalidParameter(format!(
                        "entry ({i},{j}) of H is not reduced modulo the diagonal"
                    )));
                }
            }
        }
        Ok(Self::canonical(n, denominator, h))
    }

    /// Z^n.
    pub fn standard(n: usize) -> Self {
        let h = (0..n * n).map(|k| if k % (n + 1) == 0 { BigInt::one() } else { BigInt::zero() }).collect();
        Self { denominator: BigInt::one(), h, n }
    }

    /// From small integer data, for tests and callers with native integers.
    pub fn from_i64(denominator: i64, n: usize, h: &[i64]) -> Result<Self> {
        Self::new(denominator.into(), n, h.iter().map(|&x| x.into()).collect())
    }

    /// Lattice generated by rational column vectors (each of length n).
    pub fn from_generators(n: usize, gens: &[Vec<BigRational>]) -> Result<Self> {
        let flat: Vec<BigRational> = gens.iter().flatten().cloned().collect();
        let d = rational_lcm_denominator(&flat);
        let m = gens.len();
        let mut a = vec![BigInt::zero(); n * m];
        for (j, g) in gens.iter().enumerate() {
            if g.len() != n {
                return Err(Error::InvalidParameter("generator of the wrong length".into()));
            }
            for (i, x) in g.iter().enumerate() {
                a[i * m + j] = (x * BigRational::from_integer(d.clone())).to_integer();
            }
        }
        let h = hermite_normal_form(n, m, &a)?;
        Ok(Self::canonical(n, d, h))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// Entry (i, j) of H, 0-based.
    pub fn h(&self, i: usize, j: usize) -> &BigInt {
        &self.h[i * self.n + j]
    }

    /// Basis vectors (the columns of H/D) as rationals.
    pub fn basis(&self) -> Vec<Vec<BigRational>> {
        (0..self.n)
            .map(|j| {
                (0..self.n)
                    .map(|i| BigRational::new(self.h(i, j).clone(), self.denominator.clone()))
                    .collect()
            })
            .collect()
    }

    /// det H.
    pub fn det_h(&self) -> BigInt {
        (0..self.n).map(|i| self.h(i, i).clone()).product()
    }

    /// υ_n(S) = det H / D^n.
    pub fn covolume(&self) -> BigRational {
        BigRational::new(self.det_h(), num_traits::pow(self.denominator.clone(), self.n))
    }

    /// ln υ_n(S) in floating point.
    pub fn ln_covolume(&self) -> f64 {
        ln_big(&self.det_h()) - self.n as f64 * ln_big(&self.denominator)
    }

    /// True when `x` ∈ S.
    pub fn contains(&self, x: &[BigRational]) -> bool {
        if x.len() != self.n {
            return false;
        }
        // back-substitution in H c = D x; x ∈ S iff c is integral
        let n = self.n;
        let mut c = vec![BigRational::zero(); n];
        for i in (0..n).rev() {
            let mut r = &x[i] * BigRational::from_integer(self.denominator.clone());
            for j in (i + 1)..n {
                r -= BigRational::from_integer(self.h(i, j).clone()) * &c[j];
            }
            c[i] = r / BigRational::from_integer(self.h(i, i).clone());
            if !c[i].is_integer() {
                return false;
            }
        }
        true
    }

    /// The dual lattice {y : ⟨x, y⟩ ∈ Z for x ∈ S} = D·H^{-T} Z^n.
    pub fn dual(&self) -> Self {
        let n = self.n;
        // H^{-1} is upper triangular; solve column by column
        let mut inv = vec![BigRational::zero(); n * n];
        for col in 0..n {
            for i in (0..=col).rev() {
                let mut r = if i == col { BigRational::one() } else { BigRational::zero() };
                for k in (i + 1)..=col {
                    r -= BigRational::from_integer(self.h(i, k).clone()) * &inv[k * n + col];
                }
                inv[i * n + col] = r / BigRational::from_integer(self.h(i, i).clone());
            }
        }
        let d = BigRational::from_integer(self.denominator.clone());
        // columns of D·H^{-T} are D times the rows of H^{-1}
        let gens: Vec<Vec<BigRational>> =
            (0..n).map(|r| (0..n).map(|c| &d * &inv[r * n + c]).collect()).collect();
        Self::from_generators(n, &gens).expect("dual of a full-rank lattice has full rank")
    }

    /// R ∩ S, computed as the dual of R* + S*.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::InvalidParameter(format!(
                "lattices in Q^{} and Q^{} do not intersect",
                self.n, other.n
            )));
        }
        let mut gens = self.dual().basis();
        gens.extend(other.dual().basis());
        Ok(Self::from_generators(self.n, &gens)?.dual())
    }

    /// S ∩ Q^k or S ∩ Z^k as a lattice in Q^k, 1 ≤ k ≤ n.
    pub fn intersect_flag(&self, k: usize, flag: Flag) -> Result<Self> {
        if k == 0 || k > self.n {
            return Err(Error::Bounds(format!("flag level {k} outside 1..={}", self.n)));
        }
        let h: Vec<BigInt> = (0..k * k).map(|t| self.h(t / k, t % k).clone()).collect();
        let rational = Self::canonical(k, self.denominator.clone(), h);
        match flag {
            Flag::Rational => Ok(rational),
            Flag::Integral => rational.intersect(&Self::standard(k)),
        }
    }

    /// ln υ_k(S ∩ Q^k) and ln υ_k(S ∩ Z^k) for k = 1..n.
    ///
    /// With S_k = (1/D)·H_k Z^k, υ(S_k ∩ Z^k) = det H_k / det(H_k Z^k + D Z^k).
    pub fn flag_ln_covolumes(&self) -> Vec<(f64, f64)> {
        let ln_d = ln_big(&self.denominator);
        let mut ln_det = 0.0;
        (1..=self.n)
            .map(|k| {
                ln_det += ln_big(self.h(k - 1, k - 1));
                let m = 2 * k;
                let mut g = vec![BigInt::zero(); k * m];
                for i in 0..k {
                    for j in i..k {
                        g[i * m + j] = self.h(i, j).clone();
                    }
                    g[i * m + k + i] = self.denominator.clone();
                }
                let sum = hermite_normal_form(k, m, &g).expect("full rank");
                let ln_sum: f64 = (0..k).map(|i| ln_big(&sum[i * k + i])).sum();
                (ln_det - k as f64 * ln_d, ln_det - ln_sum)
            })
            .collect()
    }
}

pub(crate) fn ln_big(x: &BigInt) -> f64 {
    match x.to_f64() {
        Some(v) if v.is_finite() => v.ln(),
        _ => {
            let bits = x.bits();
            let shift = bits.saturating_sub(60);
            let top = (x >> shift).to_f64().expect("fits");
            top.ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

impl fmt::Display for RationalLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1/{})[", self.denominator)?;
        for i in 0..self.n {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.h(i, j))?;
            }
        }
        f.write_str("]")
    }
}

impl Serialize for RationalLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_covolumes_match_intersections() {
        let mut all: Vec<RationalLattice> =
            crate::lattice::enumerate_lattices(2, 6, 1_000_000).unwrap().map(|s| s.unwrap()).collect();
        for (a, b, c) in [(1, 1, 1), (2, 3, 1), (3, 2, 4), (4, 6, 5)] {
            for (x, y, z) in [(0, 0, 0), (a - 1, 0, b - 1), (a / 2, a - 1, b / 2)] {
                for d in [1, 2, 6] {
                    all.push(RationalLattice::from_i64(d, 3, &[a, x, y, 0, b, z, 0, 0, c]).unwrap());
                }
            }
        }
        for s in all {
            let fast = s.flag_ln_covolumes();
            for k in 1..=s.n() {
                let r = s.intersect_flag(k, Flag::Rational).unwrap().ln_covolume();
                let z = s.intersect_flag(k, Flag::Integral).unwrap().ln_covolume();
                assert!((fast[k - 1].0 - r).abs() < 1e-12, "{s}");
                assert!((fast[k - 1].1 - z).abs() < 1e-12, "{s}");
            }
        }
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn covolumes() {
        assert_eq!(RationalLattice::standard(3).covolume(), q(1, 1));
        assert_eq!(RationalLattice::from_i64(1, 1, &[5]).unwrap().covolume(), q(5, 1));
        // (1/2)Z ⊕ 3Z = (1/2)·diag(1, 6)
        let s = RationalLattice::from_i64(2, 2, &[1, 0, 0, 6]).unwrap();
        assert_eq!(s.covolume(), q(3, 2));
    }

    #[test]
    fn canonical_form() {
        let a = RationalLattice::from_i64(4, 1, &[6]).unwrap();
        assert_eq!(a, RationalLattice::from_i64(2, 1, &[3]).unwrap());
        assert!(RationalLattice::from_i64(1, 2, &[2, 2, 0, 1]).is_err());
        let g = RationalLattice::from_generators(2, &[vec![q(2, 1), q(0, 1)], vec![q(3, 1), q(1, 1)], vec![q(1, 2), q(0, 1)]]).unwrap();
        assert_eq!(g, RationalLattice::from_i64(2, 2, &[1, 0, 0, 2]).unwrap());
    }

    #[test]
    fn flags() {
        let z2 = RationalLattice::standard(2);
        for f in [Flag::Rational, Flag::Integral] {
            assert_eq!(z2.intersect_flag(1, f).unwrap(), RationalLattice::standard(1));
        }
        let half = RationalLattice::from_i64(2, 2, &[1, 0, 0, 1]).unwrap();
        assert_eq!(half.intersect_flag(1, Flag::Rational).unwrap(), RationalLattice::from_i64(2, 1, &[1]).unwrap());
        assert_eq!(half.intersect_flag(1, Flag::Integral).unwrap(), RationalLattice::standard(1));
        let s = RationalLattice::from_i64(7, 1, &[3]).unwrap();
        assert_eq!(s.intersect_flag(1, Flag::Integral).unwrap(), RationalLattice::from_i64(1, 1, &[3]).unwrap());
    }

    #[test]
    fn dual_and_intersection() {
        let s = RationalLattice::from_i64(3, 2, &[2, 1, 0, 5]).unwrap();
        assert_eq!(s.dual().dual(), s);
        assert_eq!(s.covolume() * s.dual().covolume(), q(1, 1));
        let a = RationalLattice::from_i64(1, 1, &[4]).unwrap();
        let b = RationalLattice::from_i64(1, 1, &[6]).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), RationalLattice::from_i64(1, 1, &[12]).unwrap());
    }

    #[test]
    fn membership() {
        let s = RationalLattice::from_i64(2, 2, &[2, 1, 0, 3]).unwrap();
        assert!(s.contains(&[q(1, 1), q(0, 1)]));
        assert!(s.contains(&[q(1, 2), q(3, 2)]));
        assert!(!s.contains(&[q(1, 2), q(0, 1)]));
        assert!(!s.contains(&[q(0, 1), q(3, 2)]));
    }
}
