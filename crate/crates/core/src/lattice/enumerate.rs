use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::lattice::hnf::RationalLattice;

/// Default cap on the number of lattices one enumeration may produce.
pub const DEFAULT_CAP: usize = 5_000_000;

/// Upper-triangular HNF matrices with determinant `det` in dimension n ≤ 2,
/// in lexicographic row-major order.
fn hnf_matrices(n: usize, det: u64) -> Vec<Vec<u64>> {
    match n {
        1 => vec![vec![det]],
        2 => {
            let mut out = Vec::new();
            for a in 1..=det {
                if det % a == 0 {
                    let c = det / a;
                    for b in 0..a {
                        out.push(vec![a, b, 0, c]);
                    }
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

fn check_dimension(n: usize) -> Result<()> {
    if n == 0 || n > 2 {
        return Err(Error::Unsupported(format!("lattice enumeration in dimension {n} (supported: 1, 2)")));
    }
    Ok(())
}

/// Canonical lattices (1/D)H with D ≤ `bound` and det H ≤ `bound`, ordered by
/// D, then det H, then H lexicographically. The iterator yields
/// `Err(Budget)` once the cap is exceeded and then stops.
pub fn enumerate_lattices(n: usize, bound: u64, cap: usize) -> Result<LatticeStream> {
    check_dimension(n)?;
    if bound == 0 {
        return Err(Error::InvalidParameter("bound must be at least 1".into()));
    }
    Ok(LatticeStream { n, bound, cap, d: 1, det: 1, pending: Vec::new(), emitted: 0, done: false })
}

/// Stream returned by [`enumerate_lattices`].
pub struct LatticeStream {
    n: usize,
    bound: u64,
    cap: usize,
    d: u64,
    det: u64,
    pending: Vec<Vec<u64>>,
    emitted: usize,
    done: bool,
}

impl LatticeStream {
    fn refill(&mut self) -> bool {
        while self.pending.is_empty() {
            if self.d > self.bound {
                return false;
            }
            let d = self.d;
            let mut batch: Vec<Vec<u64>> = hnf_matrices(self.n, self.det)
                .into_iter()
                .filter(|h| h.iter().fold(d, |g, &x| g.gcd(&x)) == 1)
                .collect();
            batch.reverse();
            self.pending = batch;
            self.det += 1;
            if self.det > self.bound {
                self.det = 1;
                self.d += 1;
            }
            if !self.pending.is_empty() {
                // carry D alongside; the last element is the next to emit
                let dv = d;
                for h in self.pending.iter_mut() {
                    h.push(dv);
                }
            }
        }
        true
    }
}

impl Iterator for LatticeStream {
    type Item = Result<RationalLattice>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done || !self.refill() {
            return None;
        }
        if self.emitted >= self.cap {
            self.done = true;
            return Some(Err(Error::Budget { cap: self.cap }));
        }
        let mut h = self.pending.pop().expect("refilled");
        let d = h.pop().expect("denominator carried");
        self.emitted += 1;
        let lattice = RationalLattice::new(
            BigInt::from(d),
            self.n,
            h.into_iter().map(BigInt::from).collect(),
        );
        Some(lattice)
    }
}

/// All sublattices of Z^n (n ≤ 2) of index at most `bound`, in the same order.
pub fn sublattices(n: usize, bound: u64) -> Result<Vec<RationalLattice>> {
    check_dimension(n)?;
    let mut out = Vec::new();
    for det in 1..=bound {
        for h in hnf_matrices(n, det) {
            out.push(RationalLattice::new(BigInt::from(1), n, h.into_iter().map(BigInt::from).collect())?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::hnf::Flag;
    use num_rational::BigRational;
    use std::collections::BTreeSet;

    fn collect(n: usize, b: u64) -> Vec<RationalLattice> {
        enumerate_lattices(n, b, DEFAULT_CAP).unwrap().collect::<Result<Vec<_>>>().unwrap()
    }

    #[test]
    fn n1_counts() {
        assert_eq!(collect(1, 1), vec![RationalLattice::standard(1)]);
        assert_eq!(collect(1, 3).len(), 7);
        for b in 1..=12u64 {
            let coprime = (1..=b).flat_map(|p| (1..=b).map(move |q| (p, q))).filter(|(p, q)| p.gcd(q) == 1).count();
            assert_eq!(collect(1, b).len(), coprime);
        }
    }

    #[test]
    fn distinct_and_ordered() {
        let v = collect(2, 6);
        let set: BTreeSet<_> = v.iter().cloned().collect();
        assert_eq!(set.len(), v.len());
        let keys: Vec<_> = v.iter().map(|l| (l.denominator().clone(), l.det_h())).collect();
        assert!(keys.windows(2).all(|w| w[0] <= w[1]));
    }

    /// Every lattice L with D ≤ B, det H ≤ B satisfies D·Z² ⊇ ... ; brute force:
    /// subgroups of (1/D)Z² containing D'·Z² enumerated by generator pairs.
    #[test]
    fn n2_brute_force() {
        for b in 1..=4i64 {
            let mut brute = BTreeSet::new();
            for d in 1..=b {
                // generators (x1/d, x2/d) with entries in a window wide enough for det ≤ b
                let range = -(b as i64)..=(b as i64);
                let vs: Vec<(i64, i64)> = range.clone().flat_map(|x| range.clone().map(move |y| (x, y))).collect();
                for &(a1, a2) in &vs {
                    for &(b1, b2) in &vs {
                        let det = a1 * b2 - a2 * b1;
                        if det <= 0 || det > b {
                            continue;
                        }
                        let q = |x: i64| BigRational::new(x.into(), d.into());
                        let l = RationalLattice::from_generators(2, &[vec![q(a1), q(a2)], vec![q(b1), q(b2)]]).unwrap();
                        if l.denominator() <= &BigInt::from(b) && l.det_h() <= BigInt::from(b) {
                            brute.insert(l);
                        }
                    }
                }
            }
            let listed: BTreeSet<_> = collect(2, b as u64).into_iter().collect();
            assert_eq!(listed, brute, "B = {b}");
        }
    }

    #[test]
    fn budget() {
        let mut s = enumerate_lattices(2, 10, 5).unwrap();
        for _ in 0..5 {
            assert!(s.next().unwrap().is_ok());
        }
        assert!(matches!(s.next(), Some(Err(Error::Budget { cap: 5 }))));
        assert!(s.next().is_none());
    }

    #[test]
    fn sublattice_pool() {
        let pool = sublattices(2, 4).unwrap();
        assert_eq!(pool.len(), 15);
        for l in &pool {
            assert_eq!(l.intersect_flag(2, Flag::Integral).unwrap(), *l);
        }
    }
}
