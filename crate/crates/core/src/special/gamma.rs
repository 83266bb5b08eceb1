use num_complex::Complex64;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// B_{2k} / (2k (2k-1)) for k = 1..9.
const STIRLING: [f64; 9] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
];

const SHIFT_TARGET: f64 = 12.0;

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Principal branch of log Γ(z): the analytic continuation from the positive
/// real axis with branch cut along the negative real axis.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain(format!("log-gamma argument {z} is not finite")));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            func: "gamma",
            at: format!("{}", z.re),
        });
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < SHIFT_TARGET {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - shift)
}

fn stirling(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series
}

/// log Γ(x) for real x, returned as a complex number whose imaginary part is
/// a multiple of π carrying the sign of Γ(x).
pub fn ln_gamma_real(x: f64) -> Result<Complex64> {
    ln_gamma(Complex64::new(x, 0.0))
}

/// Γ(x) for real x.
pub fn gamma(x: f64) -> Result<f64> {
    let l = ln_gamma_real(x)?;
    Ok(l.exp().re)
}

/// A running product of gamma values, powers and constants held in log
/// space and exponentiated once at the end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaProduct {
    ln: Complex64,
    zero: bool,
}

impl Default for GammaProduct {
    fn default() -> Self {
        Self::one()
    }
}

impl GammaProduct {
    pub fn one() -> Self {
        Self {
            ln: Complex64::new(0.0, 0.0),
            zero: false,
        }
    }

    /// Multiply by Γ(z).
    pub fn gamma(mut self, z: impl Into<Complex64>) -> Result<Self> {
        self.ln += ln_gamma(z.into())?;
        Ok(self)
    }

    /// Divide by Γ(z); a pole of Γ makes the whole product zero.
    pub fn inv_gamma(mut self, z: impl Into<Complex64>) -> Result<Self> {
        let z = z.into();
        if is_nonpositive_integer(z) {
            self.zero = true;
        } else {
            self.ln -= ln_gamma(z)?;
        }
        Ok(self)
    }

    /// Multiply by a nonzero real or complex constant.
    pub fn times(mut self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        if c == Complex64::new(0.0, 0.0) {
            self.zero = true;
        } else {
            self.ln += c.ln();
        }
        self
    }

    /// Multiply by base^e for a positive real base.
    pub fn pow(mut self, base: f64, e: impl Into<Complex64>) -> Self {
        self.ln += e.into() * base.ln();
        self
    }

    /// Multiply by exp(l).
    pub fn exp_times(mut self, l: impl Into<Complex64>) -> Self {
        self.ln += l.into();
        self
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// The accumulated logarithm; meaningless when the product is zero.
    pub fn ln(&self) -> Complex64 {
        self.ln
    }

    pub fn value(&self) -> Complex64 {
        if self.zero {
            Complex64::new(0.0, 0.0)
        } else {
            self.ln.exp()
        }
    }

    /// Real part of the value, for products known to be real.
    pub fn real(&self) -> f64 {
        self.value().re
    }
}
