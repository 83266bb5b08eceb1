use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::gamma::ln_gamma_real;

/// B_{2j} / (2j)! for j = 1..12.
const BERNOULLI_OVER_FACTORIAL: [f64; 12] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
    43_867.0 / 5_109_094_217_170_944_000.0,
    -174_611.0 / 802_857_662_698_291_200_000.0,
    854_513.0 / 419_985_325_381_381_867_520_000.0,
    -236_364_091.0 / 1_196_852_763_134_691_331_686_400_000.0,
];

const HEAD: usize = 20;

/// Riemann ζ(s) for real s ≠ 1.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::domain(format!("zeta argument {s} is not finite")));
    }
    if s == 1.0 {
        return Err(Error::Pole {
            func: "zeta",
            at: "1".into(),
        });
    }
    if s == 0.0 {
        return Ok(-0.5);
    }
    if s < 0.0 {
        return Ok(reflected(s));
    }
    if s >= 40.0 {
        return Ok(direct(s));
    }
    Ok(euler_maclaurin(s))
}

fn direct(s: f64) -> f64 {
    let mut sum = 1.0;
    let mut k = 2.0f64;
    loop {
        let t = k.powf(-s);
        sum += t;
        if t < 1e-17 * sum {
            return sum;
        }
        k += 1.0;
    }
}

fn euler_maclaurin(s: f64) -> f64 {
    let n = HEAD as f64;
    let mut sum = 0.0;
    for k in (1..HEAD).rev() {
        sum += (k as f64).powf(-s);
    }
    let n_pow = n.powf(-s);
    sum += n * n_pow / (s - 1.0) + 0.5 * n_pow;
    // Rising factorial s(s+1)...(s+2j-2) times n^{-s-2j+1}.
    let mut rising = s;
    let mut tail = n_pow / n;
    for (j, c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = c * rising * tail;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        let m = 2.0 * j as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        tail /= n * n;
    }
    sum
}

/// ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s) for s < 0.
fn reflected(s: f64) -> f64 {
    if s == s.round() && (s as i64) % 2 == 0 {
        return 0.0;
    }
    let half = 0.5 * s;
    let sin = (PI * (half - 2.0 * (half / 2.0).floor())).sin();
    let lg = ln_gamma_real(1.0 - s).expect("1 - s > 1 is never a pole");
    let zeta_reflected = if 1.0 - s >= 40.0 {
        direct(1.0 - s)
    } else {
        euler_maclaurin(1.0 - s)
    };
    let ln_mag = s * 2f64.ln() + (s - 1.0) * PI.ln() + lg.re;
    sin * ln_mag.exp() * zeta_reflected
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn exact_values() {
        assert!(close(riemann_zeta(2.0).unwrap(), PI * PI / 6.0, 1e-14));
        assert!(close(riemann_zeta(4.0).unwrap(), PI.powi(4) / 90.0, 1e-14));
        assert!(close(riemann_zeta(-1.0).unwrap(), -1.0 / 12.0, 1e-13));
        assert!(close(riemann_zeta(-3.0).unwrap(), 1.0 / 120.0, 1e-13));
        assert_eq!(riemann_zeta(-2.0).unwrap(), 0.0);
        assert_eq!(riemann_zeta(0.0).unwrap(), -0.5);
    }

    #[test]
    fn reference_values() {
        assert!(close(riemann_zeta(3.0).unwrap(), 1.202_056_903_159_594_3, 1e-14));
        assert!(close(riemann_zeta(0.5).unwrap(), -1.460_354_508_809_586_8, 1e-13));
        assert!(close(riemann_zeta(-2.5).unwrap(), 0.008_516_928_777_850_331, 1e-12));
        assert!(close(riemann_zeta(7.5).unwrap(), 1.005_826_727_536_522_8, 1e-14));
        assert!(close(riemann_zeta(1.5).unwrap(), 2.612_375_348_685_488_3, 1e-14));
    }

    #[test]
    fn pole() {
        assert!(matches!(riemann_zeta(1.0), Err(Error::Pole { .. })));
    }

    #[test]
    fn continuity_across_direct_switch() {
        let a = euler_maclaurin(40.0);
        let b = direct(40.0);
        assert!(close(a, b, 1e-15));
    }
}
