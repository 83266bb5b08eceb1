use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrate::proposal::Proposal;

/// Random generator used by every sampler.
pub type McRng = ChaCha8Rng;

/// Samples per chunk; each chunk has its own random stream.
pub const CHUNK: usize = 4096;

/// A real value stored as sign and log-magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLn {
    pub sign: f64,
    pub ln_abs: f64,
}

impl SignedLn {
    pub const ZERO: SignedLn = SignedLn {
        sign: 0.0,
        ln_abs: f64::NEG_INFINITY,
    };

    pub fn positive(ln_abs: f64) -> Self {
        Self { sign: 1.0, ln_abs }
    }

    pub fn from_value(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: x.signum(),
                ln_abs: x.abs().ln(),
            }
        }
    }

    /// Real part of exp(l).
    pub fn re_exp(l: Complex64) -> Self {
        let c = l.im.cos();
        if c == 0.0 || l.re == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self {
                sign: c.signum(),
                ln_abs: l.re + c.abs().ln(),
            }
        }
    }

    pub fn value(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }
}

/// Importance-sampling estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
    /// Number of samples with nonzero weight.
    pub effective_samples: u64,
}

impl MCEstimate {
    /// c·estimate for a deterministic constant c.
    pub fn scaled(mut self, c: f64) -> Self {
        self.mean *= c;
        self.stderr *= c.abs();
        self
    }
}

fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

#[derive(Debug, Clone, Copy)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
    nonzero: u64,
    finite: bool,
}

impl Moments {
    fn merge(self, o: Moments) -> Moments {
        if self.count == 0 {
            return o;
        }
        if o.count == 0 {
            return self;
        }
        let count = self.count + o.count;
        let delta = o.mean - self.mean;
        let (na, nb, n) = (self.count as f64, o.count as f64, count as f64);
        Moments {
            count,
            mean: self.mean + delta * nb / n,
            m2: self.m2 + o.m2 + delta * delta * na * nb / n,
            nonzero: self.nonzero + o.nonzero,
            finite: self.finite && o.finite,
        }
    }
}

/// The random stream for chunk `index` under `seed`.
pub fn chunk_rng(seed: u64, index: u64) -> McRng {
    let mut rng = McRng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn run_chunk<F>(integrand: &F, proposal: &dyn Proposal, seed: u64, index: u64, len: usize) -> Moments
where
    F: Fn(&[f64]) -> SignedLn + Sync,
{
    let mut rng = chunk_rng(seed, index);
    let mut x = vec![0.0; proposal.dim()];
    let mut w = Vec::with_capacity(len);
    let mut nonzero = 0;
    for _ in 0..len {
        let weight = match proposal.draw(&mut rng, &mut x) {
            None => 0.0,
            Some(ln_q) => {
                let f = integrand(&x);
                if f.sign == 0.0 {
                    0.0
                } else {
                    f.sign * (f.ln_abs - ln_q).exp()
                }
            }
        };
        if weight != 0.0 {
            nonzero += 1;
        }
        w.push(weight);
    }
    let finite = w.iter().all(|v| v.is_finite());
    let mean = pairwise_sum(&w) / len as f64;
    for v in w.iter_mut() {
        *v = (*v - mean) * (*v - mean);
    }
    Moments {
        count: len as u64,
        mean,
        m2: pairwise_sum(&w),
        nonzero,
        finite,
    }
}

/// Importance-sampling estimate of ∫ f over the proposal's support using `n`
/// draws. Deterministic in (seed, n): chunks may run on any number of
/// threads and are reduced in index order.
pub fn mc_integrate<F>(integrand: F, proposal: &dyn Proposal, n: u64, seed: u64) -> Result<MCEstimate>
where
    F: Fn(&[f64]) -> SignedLn + Sync,
{
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "Monte Carlo needs at least 2 samples, got {n}"
        )));
    }
    let chunks = n.div_ceil(CHUNK as u64);
    let moments: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let len = (n - i * CHUNK as u64).min(CHUNK as u64) as usize;
            run_chunk(&integrand, proposal, seed, i, len)
        })
        .collect();
    let total = moments
        .into_iter()
        .fold(Moments { count: 0, mean: 0.0, m2: 0.0, nonzero: 0, finite: true }, Moments::merge);
    if !total.finite {
        return Err(Error::Singular(
            "an importance weight was not finite; the integrand was evaluated at a singular point \
             or the proposal density vanished inside the integrand's support"
                .into(),
        ));
    }
    if (total.nonzero as f64) < 1e-3 * n as f64 {
        return Err(Error::DegenerateWeights {
            effective: total.nonzero,
            total: n,
        });
    }
    let var = total.m2 / (n - 1) as f64;
    Ok(MCEstimate {
        mean: total.mean,
        stderr: (var / n as f64).sqrt(),
        n_samples: n,
        seed,
        effective_samples: total.nonzero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::proposal::{BoxUniform, CauchyProduct};

    #[test]
    fn constant_against_normalized_proposal() {
        let p = CauchyProduct::new(vec![1.0, 2.0]);
        let e = mc_integrate(|x| SignedLn::positive(p.ln_density(x)), &p, 10_000, 1).unwrap();
        assert!((e.mean - 1.0).abs() < 1e-12);
        assert!(e.stderr < 1e-12);
    }

    #[test]
    fn box_volume() {
        let p = BoxUniform::new(vec![(0.0, 2.0), (-1.0, 2.0)]).unwrap();
        let e = mc_integrate(|_| SignedLn::positive(0.0), &p, 5000, 3).unwrap();
        assert!((e.mean - 6.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_and_partial_chunks() {
        let p = CauchyProduct::new(vec![1.0]);
        let f = |x: &[f64]| SignedLn::positive(-x[0] * x[0]);
        let a = mc_integrate(f, &p, 10_001, 42).unwrap();
        let b = mc_integrate(f, &p, 10_001, 42).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        let c = mc_integrate(f, &p, 10_001, 43).unwrap();
        assert_ne!(a.mean.to_bits(), c.mean.to_bits());
    }

    #[test]
    fn degenerate_weights() {
        let p = BoxUniform::new(vec![(0.0, 1.0)]).unwrap();
        let r = mc_integrate(|_| SignedLn::ZERO, &p, 10_000, 0);
        assert!(matches!(r, Err(Error::DegenerateWeights { effective: 0, .. })));
    }

    #[test]
    fn signed_values() {
        assert_eq!(SignedLn::from_value(-2.0).value(), -2.0);
        assert_eq!(SignedLn::from_value(0.0).value(), 0.0);
        let v = SignedLn::re_exp(Complex64::new(1.0, std::f64::consts::PI)).value();
        assert!((v + 1f64.exp()).abs() < 1e-14);
    }
}
