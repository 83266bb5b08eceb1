use serde::{Deserialize, Serialize};

use crate::algebra::{hermitian_eigenvalues, MatK};
use crate::error::{Error, Result};
use crate::integrate::table_offset;

/// Spectra of the leading corners [X]_1, ..., [X]_n, each row ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayleighTable {
    n: usize,
    /// Row j (1-based) occupies `table_offset(j)..table_offset(j) + j`.
    entries: Vec<f64>,
}

impl RayleighTable {
    /// Builds a table from its rows, checking sizes, order and interlacing.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidParameter("a table needs at least one row".into()));
        }
        let mut entries = Vec::with_capacity(n * (n + 1) / 2);
        for (j, r) in rows.iter().enumerate() {
            if r.len() != j + 1 {
                return Err(Error::InvalidParameter(format!(
                    "row {} has {} entries, expected {}",
                    j + 1,
                    r.len(),
                    j + 1
                )));
            }
            entries.extend_from_slice(r);
        }
        let t = Self { n, entries };
        t.check_interlacing(0.0)?;
        Ok(t)
    }

    /// Table from its flattened entries (the layout used by table samplers).
    pub fn from_flat(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 || entries.len() != n * (n + 1) / 2 {
            return Err(Error::InvalidParameter(format!(
                "{} entries do not form a table with n = {n}",
                entries.len()
            )));
        }
        let t = Self { n, entries };
        t.check_interlacing(0.0)?;
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Row j, 1-based.
    pub fn row(&self, j: usize) -> &[f64] {
        let o = table_offset(j);
        &self.entries[o..o + j]
    }

    pub fn flat(&self) -> &[f64] {
        &self.entries
    }

    /// λ_{jα}, 1-based.
    pub fn get(&self, j: usize, alpha: usize) -> f64 {
        self.entries[table_offset(j) + alpha - 1]
    }

    /// Largest violation of λ_{j+1,α} ≤ λ_{jα} ≤ λ_{j+1,α+1} or of row order,
    /// with its row.
    fn worst_violation(&self) -> (usize, f64) {
        let mut worst = (0, 0.0f64);
        for j in 1..=self.n {
            let r = self.row(j);
            for w in r.windows(2) {
                if w[0] - w[1] > worst.1 {
                    worst = (j, w[0] - w[1]);
                }
            }
            if j < self.n {
                let next = self.row(j + 1);
                for a in 0..j {
                    let e = (next[a] - r[a]).max(r[a] - next[a + 1]);
                    if e > worst.1 {
                        worst = (j, e);
                    }
                }
            }
        }
        worst
    }

    fn check_interlacing(&self, tol: f64) -> Result<()> {
        let (row, excess) = self.worst_violation();
        if excess > tol {
            Err(Error::Interlacing { row, excess })
        } else {
            Ok(())
        }
    }

    /// Clamps each entry into its interlacing interval, working down from row n.
    fn snap(&mut self) {
        for j in (1..=self.n).rev() {
            let o = table_offset(j);
            for a in 1..j {
                if self.entries[o + a] < self.entries[o + a - 1] {
                    self.entries[o + a] = self.entries[o + a - 1];
                }
            }
            if j < self.n {
                let next = table_offset(j + 1);
                for a in 0..j {
                    let (lo, hi) = (self.entries[next + a], self.entries[next + a + 1]);
                    self.entries[o + a] = self.entries[o + a].clamp(lo, hi);
                }
            }
        }
    }
}

/// Ascending spectra of every leading corner of a Hermitian matrix.
/// Interlacing defects up to 1e-10·‖X‖ are snapped away; larger ones are
/// reported as errors.
pub fn corners_to_table(x: &MatK) -> Result<RayleighTable> {
    x.check_hermitian()?;
    let n = x.rows();
    if n == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    let mut entries = Vec::with_capacity(n * (n + 1) / 2);
    for p in 1..=n {
        let mut ev = hermitian_eigenvalues(&x.corner(p, p)?)?;
        ev.reverse();
        entries.extend(ev);
    }
    let mut t = RayleighTable { n, entries };
    t.check_interlacing(1e-10 * x.frobenius_norm().max(f64::MIN_POSITIVE))?;
    t.snap();
    Ok(t)
}

/// Parameters θ_{jα} > 0 for 1 ≤ α ≤ j ≤ n-1, flattened like the table rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaTable {
    n: usize,
    values: Vec<f64>,
}

impl ThetaTable {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("table size must be at least 1".into()));
        }
        let len = n * (n - 1) / 2;
        if values.len() != len {
            return Err(Error::InvalidParameter(format!(
                "θ needs {len} entries for n = {n}, got {}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::domain(format!("θ entries must be positive, got {v}")));
        }
        Ok(Self { n, values })
    }

    /// θ ≡ c.
    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::new(n, vec![c; n * n.saturating_sub(1) / 2])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// θ_{jα}, 1-based, j ≤ n-1.
    pub fn get(&self, j: usize, alpha: usize) -> f64 {
        self.values[table_offset(j) + alpha - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Σ_α θ_{jα}; zero for j = 0.
    pub fn row_sum(&self, j: usize) -> f64 {
        (1..=j).map(|a| self.get(j, a)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    #[test]
    fn diagonal_matrix() {
        let t = corners_to_table(&MatK::real_diag(&[1.0, 2.0])).unwrap();
        assert_eq!(t.row(1), &[1.0]);
        assert_eq!(t.row(2), &[1.0, 2.0]);
    }

    #[test]
    fn top_row_is_spectrum() {
        let coords = [0.3, -1.2, 2.0, 0.5, 0.1, -0.7];
        let x = crate::algebra::hermitian_coords::to_matrix(Field::R, 3, &coords);
        let t = corners_to_table(&x).unwrap();
        let mut ev = hermitian_eigenvalues(&x).unwrap();
        ev.reverse();
        for (a, b) in t.row(3).iter().zip(&ev) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(RayleighTable::from_rows(&[vec![0.0], vec![1.0, 2.0]]).is_err());
        assert!(RayleighTable::from_rows(&[vec![1.5], vec![1.0, 2.0]]).is_ok());
        assert!(RayleighTable::from_rows(&[vec![1.5], vec![1.0]]).is_err());
        assert!(ThetaTable::new(3, vec![1.0, 1.0]).is_err());
        assert!(ThetaTable::new(2, vec![-1.0]).is_err());
    }
}
