use std::ops::{Add, Index, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{Field, Quaternion};
use crate::error::{Error, Result};

/// Dense p×q matrix with entries in R, C or H (stored as quaternions).
#[derive(Debug, Clone, PartialEq)]
pub struct MatK {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl MatK {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![Quaternion::ZERO; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = Quaternion::ONE;
        }
        m
    }

    /// Build from a function of (row, col); every entry must lie in `field`.
    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Quaternion,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let q = f(i, j);
                if !field.contains(q) {
                    return Err(Error::InvalidParameter(format!(
                        "entry ({i},{j}) = {q:?} is not in {field}"
                    )));
                }
                data.push(q);
            }
        }
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Real matrix from row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        Self {
            field: Field::R,
            rows,
            cols,
            data: entries.iter().map(|&x| Quaternion::real(x)).collect(),
        }
    }

    /// Complex matrix from row-major entries.
    pub fn from_complex(rows: usize, cols: usize, entries: &[Complex64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        Self {
            field: Field::C,
            rows,
            cols,
            data: entries.iter().map(|&c| Quaternion::from_complex(c)).collect(),
        }
    }

    /// Quaternionic matrix from row-major entries.
    pub fn from_quaternions(rows: usize, cols: usize, entries: &[Quaternion]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        Self {
            field: Field::H,
            rows,
            cols,
            data: entries.to_vec(),
        }
    }

    /// Matrix whose entries take `field.dim()` consecutive real coordinates each,
    /// row-major.
    pub fn from_coords(field: Field, rows: usize, cols: usize, coords: &[f64]) -> Self {
        let d = field.dim();
        assert_eq!(coords.len(), rows * cols * d, "coordinate count");
        Self {
            field,
            rows,
            cols,
            data: coords.chunks(d).map(Quaternion::from_slice).collect(),
        }
    }

    /// Diagonal matrix.
    pub fn diag(field: Field, entries: &[Quaternion]) -> Result<Self> {
        let n = entries.len();
        Self::from_fn(field, n, n, |i, j| if i == j { entries[i] } else { Quaternion::ZERO })
    }

    pub fn real_diag(entries: &[f64]) -> Self {
        let q: Vec<Quaternion> = entries.iter().map(|&x| Quaternion::real(x)).collect();
        Self::diag(Field::R, &q).expect("real entries")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        self.data[i * self.cols + j]
    }

    /// Set an entry; fails if the value is outside the matrix's field.
    pub fn set(&mut self, i: usize, j: usize, q: Quaternion) -> Result<()> {
        if i >= self.rows || j >= self.cols {
            return Err(Error::Bounds(format!(
                "({i},{j}) in a {}×{} matrix",
                self.rows, self.cols
            )));
        }
        if !self.field.contains(q) {
            return Err(Error::InvalidParameter(format!("{q:?} is not in {}", self.field)));
        }
        self.data[i * self.cols + j] = q;
        Ok(())
    }

    pub(crate) fn set_unchecked(&mut self, i: usize, j: usize, q: Quaternion) {
        self.data[i * self.cols + j] = q;
    }

    /// The same matrix regarded over a larger field.
    pub fn promote(mut self, field: Field) -> Self {
        self.field = self.field.join(field);
        self
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.data
    }

    /// Upper-left p×q corner.
    pub fn corner(&self, p: usize, q: usize) -> Result<Self> {
        if p > self.rows || q > self.cols {
            return Err(Error::Bounds(format!(
                "corner {p}×{q} of a {}×{} matrix",
                self.rows, self.cols
            )));
        }
        let mut m = Self::zeros(self.field, p, q);
        for i in 0..p {
            m.data[i * q..(i + 1) * q].copy_from_slice(&self.data[i * self.cols..i * self.cols + q]);
        }
        Ok(m)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.get(i, j);
            }
        }
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = self.clone();
        m.data.iter_mut().for_each(|q| *q = *q * s);
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    /// max |X - X*| over entries.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut defect: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                defect = defect.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        defect
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    /// Fails unless the matrix is Hermitian within 1e-12·‖X‖.
    pub fn check_hermitian(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::Bounds(format!(
                "{}×{} matrix is not square",
                self.rows, self.cols
            )));
        }
        let tolerance = 1e-12 * self.frobenius_norm();
        let defect = self.hermitian_defect();
        if defect > tolerance {
            return Err(Error::NotHermitian { defect, tolerance });
        }
        Ok(())
    }

    /// Real (d p)×(d q) matrix of the R-linear map, with each entry replaced by
    /// its left-multiplication block on R^d.
    pub fn real_embedding(&self) -> DMatrix<f64> {
        let d = self.field.dim();
        let mut m = DMatrix::zeros(d * self.rows, d * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let l = self.get(i, j).left_matrix();
                for a in 0..d {
                    for b in 0..d {
                        m[(d * i + a, d * j + b)] = l[a][b];
                    }
                }
            }
        }
        m
    }

    /// Complex matrix of the same size for R and C; for H the 2p×2q matrix
    /// [[A, B], [-conj B, conj A]] of X = A + B j.
    pub fn complex_embedding(&self) -> DMatrix<Complex64> {
        let (p, q) = (self.rows, self.cols);
        match self.field {
            Field::R | Field::C => DMatrix::from_fn(p, q, |i, j| self.get(i, j).split().0),
            Field::H => {
                let mut m = DMatrix::zeros(2 * p, 2 * q);
                for i in 0..p {
                    for j in 0..q {
                        let (a, b) = self.get(i, j).split();
                        m[(i, j)] = a;
                        m[(i, q + j)] = b;
                        m[(p + i, j)] = -b.conj();
                        m[(p + i, q + j)] = a.conj();
                    }
                }
                m
            }
        }
    }

    /// Real coordinates of all entries, row-major, `field.dim()` per entry.
    pub fn to_coords(&self) -> Vec<f64> {
        self.data.iter().flat_map(|&q| self.field.coords(q)).collect()
    }

    fn check_same_shape(&self, other: &Self) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch {}×{} vs {}×{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }
}

impl Index<(usize, usize)> for MatK {
    type Output = Quaternion;
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        &self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a MatK> for &'a MatK {
    type Output = MatK;
    fn mul(self, o: &'a MatK) -> MatK {
        assert_eq!(self.cols, o.rows, "inner dimensions");
        let mut m = MatK::zeros(self.field.join(o.field), self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Quaternion::ZERO {
                    continue;
                }
                for j in 0..o.cols {
                    m.data[i * o.cols + j] += a * o.get(k, j);
                }
            }
        }
        m
    }
}

impl<'a> Add<&'a MatK> for &'a MatK {
    type Output = MatK;
    fn add(self, o: &'a MatK) -> MatK {
        self.check_same_shape(o);
        let mut m = self.clone().promote(o.field);
        m.data.iter_mut().zip(&o.data).for_each(|(a, &b)| *a += b);
        m
    }
}

impl<'a> Sub<&'a MatK> for &'a MatK {
    type Output = MatK;
    fn sub(self, o: &'a MatK) -> MatK {
        self.check_same_shape(o);
        let mut m = self.clone().promote(o.field);
        m.data.iter_mut().zip(&o.data).for_each(|(a, &b)| *a -= b);
        m
    }
}

/// Symmetric/Hermitian n×n matrices in real coordinates: the n diagonal
/// entries first, then the d real components of each entry above the
/// diagonal, row by row.
pub mod hermitian_coords {
    use super::*;

    pub fn dim(field: Field, n: usize) -> usize {
        n + field.dim() * n * (n - 1) / 2
    }

    pub fn to_matrix(field: Field, n: usize, coords: &[f64]) -> MatK {
        assert_eq!(coords.len(), dim(field, n), "coordinate count");
        let d = field.dim();
        let mut m = MatK::zeros(field, n, n);
        for i in 0..n {
            m.set_unchecked(i, i, Quaternion::real(coords[i]));
        }
        let mut k = n;
        for i in 0..n {
            for j in (i + 1)..n {
                let q = Quaternion::from_slice(&coords[k..k + d]);
                m.set_unchecked(i, j, q);
                m.set_unchecked(j, i, q.conj());
                k += d;
            }
        }
        m
    }

    pub fn from_matrix(x: &MatK) -> Vec<f64> {
        let n = x.rows();
        let field = x.field();
        let mut out = Vec::with_capacity(dim(field, n));
        for i in 0..n {
            out.push(x.get(i, i).w);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                out.extend(field.coords(x.get(i, j)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corner_examples() {
        let i3 = MatK::identity(Field::R, 3);
        assert_eq!(i3.corner(2, 2).unwrap(), MatK::identity(Field::R, 2));
        assert_eq!(i3.corner(3, 3).unwrap(), i3);
        let x = MatK::from_real(3, 3, &[1., 2., 3., 4., 5., 6., 7., 8., 9.]);
        assert_eq!(x.corner(2, 2).unwrap(), MatK::from_real(2, 2, &[1., 2., 4., 5.]));
        assert!(matches!(x.corner(4, 1), Err(Error::Bounds(_))));
    }

    #[test]
    fn field_membership_enforced() {
        let e = MatK::from_fn(Field::R, 1, 1, |_, _| Quaternion::I);
        assert!(e.is_err());
        let mut m = MatK::zeros(Field::C, 2, 2);
        assert!(m.set(0, 1, Quaternion::J).is_err());
        assert!(m.set(0, 1, Quaternion::I).is_ok());
    }

    #[test]
    fn hermitian_coordinates_roundtrip() {
        let coords = [1.0, 2.0, 3.0, 0.5, -0.25, 4.0, 1.5, 0.75, -1.0];
        let x = hermitian_coords::to_matrix(Field::C, 3, &coords);
        assert!(x.is_hermitian(0.0));
        assert_eq!(hermitian_coords::from_matrix(&x), coords.to_vec());
    }

    #[test]
    fn quaternion_complex_embedding_is_multiplicative() {
        let a = MatK::from_quaternions(
            2,
            2,
            &[
                Quaternion::new(1.0, 2.0, -1.0, 0.5),
                Quaternion::new(0.0, 1.0, 3.0, -2.0),
                Quaternion::new(-1.5, 0.2, 0.1, 1.0),
                Quaternion::new(2.0, -0.3, 0.4, 0.0),
            ],
        );
        let b = a.adjoint();
        let lhs = (&a * &b).complex_embedding();
        let rhs = a.complex_embedding() * b.complex_embedding();
        assert!((lhs - rhs).norm() < 1e-12);
    }
}
