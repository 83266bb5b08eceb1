use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::Quaternion;
use crate::error::Error;

/// The real division algebras R, C, H.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    pub const ALL: [Field; 3] = [Field::R, Field::C, Field::H];

    /// Real dimension d.
    pub fn dim(self) -> usize {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }

    pub fn d(self) -> f64 {
        self.dim() as f64
    }

    pub fn from_dim(d: usize) -> Option<Self> {
        match d {
            1 => Some(Field::R),
            2 => Some(Field::C),
            4 => Some(Field::H),
            _ => None,
        }
    }

    /// Whether a quaternion lies in the subalgebra R, C = R + Ri, or H.
    pub fn contains(self, q: Quaternion) -> bool {
        match self {
            Field::R => q.x == 0.0 && q.y == 0.0 && q.z == 0.0,
            Field::C => q.y == 0.0 && q.z == 0.0,
            Field::H => true,
        }
    }

    /// Smallest field containing both.
    pub fn join(self, other: Field) -> Field {
        self.max(other)
    }

    /// Element with the given real coordinates (length `dim`).
    pub fn element(self, coords: &[f64]) -> Quaternion {
        debug_assert_eq!(coords.len(), self.dim());
        Quaternion::from_slice(coords)
    }

    /// Real coordinates of an element of this field.
    pub fn coords(self, q: Quaternion) -> impl Iterator<Item = f64> {
        q.to_array().into_iter().take(self.dim())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
        };
        f.write_str(s)
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "R" | "r" | "real" | "1" => Ok(Field::R),
            "C" | "c" | "complex" | "2" => Ok(Field::C),
            "H" | "h" | "quaternion" | "4" => Ok(Field::H),
            other => Err(Error::InvalidParameter(format!(
                "unknown field `{other}` (expected R, C or H)"
            ))),
        }
    }
}
