use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// w + x i + y j + z k.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    pub fn from_complex(c: Complex64) -> Self {
        Self::new(c.re, c.im, 0.0, 0.0)
    }

    /// Components as an array (w, x, y, z).
    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn from_slice(c: &[f64]) -> Self {
        let mut a = [0.0; 4];
        a[..c.len()].copy_from_slice(c);
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn inv(self) -> Self {
        self.conj() / self.norm_sqr()
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Write q = a + b j with complex a = w + x i, b = y + z i.
    pub fn split(self) -> (Complex64, Complex64) {
        (Complex64::new(self.w, self.x), Complex64::new(self.y, self.z))
    }

    /// Matrix of left multiplication p ↦ q p on R^4 with basis (1, i, j, k).
    pub fn left_matrix(self) -> [[f64; 4]; 4] {
        let Quaternion { w, x, y, z } = self;
        [
            [w, -x, -y, -z],
            [x, w, -z, y],
            [y, z, w, -x],
            [z, -y, x, w],
        ]
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Self::real(w)
    }
}

impl From<Complex64> for Quaternion {
    fn from(c: Complex64) -> Self {
        Self::from_complex(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units() {
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(j * i, -k);
        assert_eq!(i * i, -Quaternion::ONE);
        assert_eq!(i * j * k, -Quaternion::ONE);
    }

    #[test]
    fn norm_is_multiplicative() {
        let p = Quaternion::new(1.0, -2.0, 0.5, 3.0);
        let q = Quaternion::new(-0.3, 1.1, 2.0, -1.0);
        assert!(((p * q).norm() - p.norm() * q.norm()).abs() < 1e-13);
        let e = p * p.inv() - Quaternion::ONE;
        assert!(e.norm() < 1e-15);
    }

    #[test]
    fn left_matrix_represents_product() {
        let p = Quaternion::new(1.0, -2.0, 0.5, 3.0);
        let q = Quaternion::new(-0.3, 1.1, 2.0, -1.0);
        let m = p.left_matrix();
        let v = q.to_array();
        let mut out = [0.0; 4];
        for r in 0..4 {
            for c in 0..4 {
                out[r] += m[r][c] * v[c];
            }
        }
        let pq = (p * q).to_array();
        for r in 0..4 {
            assert!((out[r] - pq[r]).abs() < 1e-14);
        }
    }
}
