use nalgebra::{DMatrix, SymmetricEigen};
use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrate::chunk_rng;
use crate::lattice::enumerate::sublattices;
use crate::lattice::hnf::{ln_big, RationalLattice};

/// K_α(R,S) = (υ(R)υ(S))^{α/2} / υ(R∩S)^α.
pub fn berezin_kernel(r: &RationalLattice, s: &RationalLattice, alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0) {
        return Err(Error::domain(format!("α = {alpha} must be non-negative")));
    }
    let m = r.intersect(s)?.covolume();
    let ratio = r.covolume() * s.covolume() / (&m * &m);
    let ln = ln_big(ratio.numer()) - ln_big(ratio.denom());
    Ok((0.5 * alpha * ln).exp())
}

/// Gram matrix [K_α(S_i, S_j)].
pub fn berezin_gram(lattices: &[RationalLattice], alpha: f64) -> Result<DMatrix<f64>> {
    let k = lattices.len();
    let mut g = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            if j > i && lattices[i] == lattices[j] {
                return Err(Error::InvalidParameter(format!("lattices {i} and {j} coincide")));
            }
            let v = berezin_kernel(&lattices[i], &lattices[j], alpha)?;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

/// Smallest eigenvalue of the Gram matrix.
pub fn berezin_psd_probe(lattices: &[RationalLattice], alpha: f64) -> Result<f64> {
    if lattices.is_empty() {
        return Err(Error::InvalidParameter("at least one lattice is required".into()));
    }
    let g = berezin_gram(lattices, alpha)?;
    Ok(SymmetricEigen::new(g).eigenvalues.min())
}

/// A random lattice (1/D)H in Q^n with D ≤ `scale` and diagonal entries ≤ `scale`.
pub fn random_lattice<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: i64) -> RationalLattice {
    let mut h = vec![0i64; n * n];
    for j in 0..n {
        let d = rng.random_range(1..=scale);
        h[j * n + j] = d;
        for i in 0..j {
            h[i * n + j] = rng.random_range(0..h[i * n + i]);
        }
    }
    let d = rng.random_range(1..=scale);
    RationalLattice::from_i64(d, n, &h).expect("positive diagonal")
}

/// `count` distinct random lattices.
pub fn random_lattice_set<R: Rng + ?Sized>(rng: &mut R, n: usize, count: usize, scale: i64) -> Vec<RationalLattice> {
    let mut out: Vec<RationalLattice> = Vec::with_capacity(count);
    while out.len() < count {
        let l = random_lattice(rng, n, scale);
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out
}

/// Result of a randomized search for a non-PSD Gram matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessSearch {
    pub alpha: f64,
    pub min_eigenvalue: f64,
    pub witness: Vec<RationalLattice>,
    pub trials: usize,
    /// True when the smallest eigenvalue found is below the threshold.
    pub found: bool,
}

/// Randomized local search over `size`-subsets of the sublattices of Z^n
/// with index ≤ `pool_bound`: each of `trials` restarts draws a random
/// subset and swaps single members while the smallest Gram eigenvalue drops.
pub fn berezin_witness_search(
    n: usize,
    alpha: f64,
    size: usize,
    pool_bound: u64,
    trials: usize,
    threshold: f64,
    seed: u64,
) -> Result<WitnessSearch> {
    let pool = sublattices(n, pool_bound)?;
    if size == 0 || size > pool.len() {
        return Err(Error::InvalidParameter(format!(
            "subset size {size} outside 1..={} for this pool",
            pool.len()
        )));
    }
    let probe = |idx: &[usize]| {
        let set: Vec<RationalLattice> = idx.iter().map(|&i| pool[i].clone()).collect();
        berezin_psd_probe(&set, alpha)
    };
    let mut rng = chunk_rng(seed, 0);
    let mut best_idx = Vec::new();
    let mut best = f64::INFINITY;
    for _ in 0..trials {
        let mut idx = sample(&mut rng, pool.len(), size).into_vec();
        let mut cur = probe(&idx)?;
        loop {
            let mut step = None;
            for slot in 0..size {
                for cand in 0..pool.len() {
                    if idx.contains(&cand) {
                        continue;
                    }
                    let mut next = idx.clone();
                    next[slot] = cand;
                    let e = probe(&next)?;
                    if e < cur - 1e-15 {
                        cur = e;
                        step = Some(next);
                    }
                }
            }
            match step {
                Some(next) => idx = next,
                None => break,
            }
        }
        if cur < best {
            best = cur;
            best_idx = idx;
        }
    }
    best_idx.sort_unstable();
    Ok(WitnessSearch {
        alpha,
        min_eigenvalue: best,
        witness: best_idx.into_iter().map(|i| pool[i].clone()).collect(),
        trials,
        found: best < threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_values() {
        let z = RationalLattice::standard(1);
        let two = RationalLattice::from_i64(1, 1, &[2]).unwrap();
        assert_eq!(berezin_kernel(&z, &z, 1.7).unwrap(), 1.0);
        let k = berezin_kernel(&z, &two, 3.0).unwrap();
        assert!((k - 2f64.powf(-1.5)).abs() < 1e-15);
        assert!(berezin_kernel(&z, &two, -1.0).is_err());
    }

    #[test]
    fn symmetric() {
        let mut rng = chunk_rng(5, 0);
        for _ in 0..100 {
            let a = random_lattice(&mut rng, 2, 6);
            let b = random_lattice(&mut rng, 2, 6);
            assert_eq!(berezin_kernel(&a, &b, 0.8).unwrap(), berezin_kernel(&b, &a, 0.8).unwrap());
        }
    }

    #[test]
    fn alpha_zero_is_all_ones() {
        let mut rng = chunk_rng(1, 0);
        let set = random_lattice_set(&mut rng, 2, 5, 6);
        assert!(berezin_psd_probe(&set, 0.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn admissible_alpha_is_psd() {
        let mut rng = chunk_rng(2, 0);
        for _ in 0..10 {
            let set = random_lattice_set(&mut rng, 2, 5, 6);
            assert!(berezin_psd_probe(&set, 3.0).unwrap() >= -1e-10);
        }
    }

    #[test]
    fn gap_witness() {
        let pool = sublattices(2, 2).unwrap();
        let mut set = pool.clone();
        set.push(RationalLattice::from_i64(1, 2, &[2, 0, 0, 2]).unwrap());
        assert_eq!(set.len(), 5);
        let e = berezin_psd_probe(&set, 0.5).unwrap();
        assert!(e < -0.02, "{e}");
        let s = berezin_witness_search(2, 0.5, 5, 4, 20, -1e-8, 9).unwrap();
        assert!(s.found && s.min_eigenvalue <= e + 1e-12, "{} vs {e}", s.min_eigenvalue);
    }

    #[test]
    fn duplicates_rejected() {
        let z = RationalLattice::standard(2);
        assert!(berezin_psd_probe(&[z.clone(), z], 1.0).is_err());
    }
}
