use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{Field, MatK, Quaternion};
use crate::error::{Error, Result};

fn require_square(x: &MatK) -> Result<()> {
    if x.is_square() {
        Ok(())
    } else {
        Err(Error::Bounds(format!(
            "{}×{} matrix is not square",
            x.rows(),
            x.cols()
        )))
    }
}

/// Hermitian eigenvalues in non-increasing order.
pub fn hermitian_eigenvalues(x: &MatK) -> Result<Vec<f64>> {
    x.check_hermitian()?;
    let n = x.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut ev: Vec<f64> = match x.field() {
        Field::R => {
            let m = DMatrix::from_fn(n, n, |i, j| x.get(i, j).w);
            m.symmetric_eigenvalues().iter().copied().collect()
        }
        Field::C | Field::H => {
            let m = x.complex_embedding();
            m.symmetric_eigenvalues().iter().copied().collect()
        }
    };
    ev.sort_by(|a, b| b.total_cmp(a));
    if x.field() == Field::H {
        // Each eigenvalue appears twice in the complex embedding.
        ev = ev.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect();
    }
    Ok(ev)
}

/// Singular values in non-increasing order, min(p, q) of them.
pub fn singular_values(z: &MatK) -> Vec<f64> {
    let k = z.rows().min(z.cols());
    if k == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = match z.field() {
        Field::R => {
            let m = DMatrix::from_fn(z.rows(), z.cols(), |i, j| z.get(i, j).w);
            m.singular_values().iter().copied().collect()
        }
        Field::C | Field::H => z.complex_embedding().singular_values().iter().copied().collect(),
    };
    sv.sort_by(|a, b| b.total_cmp(a));
    if z.field() == Field::H {
        sv = sv.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect();
    }
    sv.truncate(k);
    sv
}

/// Largest singular value.
pub fn operator_norm(x: &MatK) -> f64 {
    singular_values(x).first().copied().unwrap_or(0.0)
}

/// Whether a Hermitian matrix is strictly positive definite.
pub fn is_positive_definite(x: &MatK) -> Result<bool> {
    let ev = hermitian_eigenvalues(x)?;
    Ok(ev.last().map_or(true, |&m| m > 0.0))
}

/// det_H(X) = det(X_R)^{1/4}; for complex or real matrices regarded as
/// quaternionic this equals |det X|.
pub fn det_quaternion(x: &MatK) -> Result<f64> {
    require_square(x)?;
    if x.rows() == 0 {
        return Ok(1.0);
    }
    let q = x.clone().promote(Field::H);
    Ok(q.real_embedding().determinant().abs().powf(0.25))
}

/// Determinant over R or C; for H the (real, non-negative) det_H.
pub fn det(x: &MatK) -> Result<Complex64> {
    require_square(x)?;
    match x.field() {
        Field::R => {
            let m = DMatrix::from_fn(x.rows(), x.cols(), |i, j| x.get(i, j).w);
            Ok(Complex64::new(m.determinant(), 0.0))
        }
        Field::C => Ok(x.complex_embedding().determinant()),
        Field::H => Ok(Complex64::new(det_quaternion(x)?, 0.0)),
    }
}

/// Upper-triangular R with positive diagonal and X = R* R, or None when X is
/// not positive definite. X is assumed Hermitian and only its upper triangle
/// is read.
pub fn cholesky_upper(x: &MatK) -> Option<MatK> {
    let n = x.rows();
    let mut r = MatK::zeros(x.field(), n, n);
    for i in 0..n {
        let mut diag = x.get(i, i).w;
        for k in 0..i {
            diag -= r.get(k, i).norm_sqr();
        }
        if !(diag > 0.0) {
            return None;
        }
        let rii = diag.sqrt();
        r.set_unchecked(i, i, Quaternion::real(rii));
        for j in (i + 1)..n {
            let mut s = x.get(i, j);
            for k in 0..i {
                s -= r.get(k, i).conj() * r.get(k, j);
            }
            r.set_unchecked(i, j, s / rii);
        }
    }
    Some(r)
}

/// Determinants det[X]_k, k = 1..n, of the leading corners of a positive
/// definite Hermitian matrix, or None if X is not positive definite.
pub fn leading_minors_pd(x: &MatK) -> Option<Vec<f64>> {
    let r = cholesky_upper(x)?;
    let mut acc = 1.0;
    Some(
        (0..x.rows())
            .map(|i| {
                let d = r.get(i, i).w;
                acc *= d * d;
                acc
            })
            .collect(),
    )
}

/// det(A A*) for a p×q matrix A of full row rank; 0 if rank deficient.
pub fn gram_det(a: &MatK) -> f64 {
    let g = a * &a.adjoint();
    leading_minors_pd(&g).and_then(|m| m.last().copied()).unwrap_or(if a.rows() == 0 {
        1.0
    } else {
        0.0
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_examples() {
        assert_eq!(
            hermitian_eigenvalues(&MatK::identity(Field::C, 3)).unwrap(),
            vec![1.0; 3]
        );
        let ev = hermitian_eigenvalues(&MatK::real_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(ev, vec![3.0, 2.0, 1.0]);
        let bad = MatK::from_real(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(
            hermitian_eigenvalues(&bad),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn quaternion_eigenvalues_once() {
        let x = MatK::from_quaternions(
            2,
            2,
            &[
                Quaternion::real(2.0),
                Quaternion::new(0.0, 0.0, 1.0, 0.0),
                Quaternion::new(0.0, 0.0, -1.0, 0.0),
                Quaternion::real(2.0),
            ],
        );
        let ev = hermitian_eigenvalues(&x).unwrap();
        assert_eq!(ev.len(), 2);
        assert!((ev[0] - 3.0).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_value_examples() {
        assert_eq!(singular_values(&MatK::zeros(Field::R, 2, 3)), vec![0.0, 0.0]);
        let a = MatK::from_complex(1, 1, &[Complex64::new(3.0, 4.0)]);
        assert!((singular_values(&a)[0] - 5.0).abs() < 1e-14);
        assert!((operator_norm(&MatK::real_diag(&[2.0, -3.0])) - 3.0).abs() < 1e-14);
        assert!((operator_norm(&MatK::identity(Field::H, 3)) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn positive_definite_examples() {
        assert!(is_positive_definite(&MatK::identity(Field::R, 2)).unwrap());
        assert!(!is_positive_definite(&MatK::real_diag(&[1.0, -1.0])).unwrap());
    }

    #[test]
    fn det_quaternion_examples() {
        let q = Quaternion::new(1.0, 2.0, -2.0, 4.0);
        let x = MatK::from_quaternions(1, 1, &[q]);
        assert!((det_quaternion(&x).unwrap() - 5.0).abs() < 1e-13);
        let c = MatK::from_complex(
            2,
            2,
            &[
                Complex64::new(1.0, 1.0),
                Complex64::new(0.5, -2.0),
                Complex64::new(3.0, 0.0),
                Complex64::new(-1.0, 0.5),
            ],
        );
        let dc = det(&c).unwrap().norm();
        assert!((det_quaternion(&c).unwrap() - dc).abs() < 1e-12 * dc);
    }

    #[test]
    fn cholesky_reconstructs() {
        let x = MatK::from_quaternions(
            2,
            2,
            &[
                Quaternion::real(4.0),
                Quaternion::new(0.5, 1.0, -0.5, 0.25),
                Quaternion::new(0.5, -1.0, 0.5, -0.25),
                Quaternion::real(3.0),
            ],
        );
        let r = cholesky_upper(&x).unwrap();
        let back = &r.adjoint() * &r;
        assert!((&back - &x).frobenius_norm() < 1e-13);
        let m = leading_minors_pd(&x).unwrap();
        assert!((m[1] - det_quaternion(&x).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn gram_det_of_unit_row() {
        let a = MatK::from_real(1, 2, &[1.0, 2.0]);
        assert!((gram_det(&a) - 5.0).abs() < 1e-14);
    }
}
