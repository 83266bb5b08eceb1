//! Named parameters for registered identities.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::Field;
use crate::error::{Error, Result};

/// A parameter value: a real, a real sequence, or a symbolic tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Real(f64),
    Seq(Vec<f64>),
    Text(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Real(x) => write!(f, "{x}"),
            ParamValue::Seq(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
            ParamValue::Text(s) => write!(f, "{s}"),
        }
    }
}

/// Ordered map from parameter names to values.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamMap(BTreeMap<String, ParamValue>);

impl ParamMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: ParamValue) -> Self {
        self.insert(key, value);
        self
    }

    pub fn with_real(self, key: &str, x: f64) -> Self {
        self.with(key, ParamValue::Real(x))
    }

    pub fn with_seq(self, key: &str, v: &[f64]) -> Self {
        self.with(key, ParamValue::Seq(v.to_vec()))
    }

    pub fn with_text(self, key: &str, s: &str) -> Self {
        self.with(key, ParamValue::Text(s.to_string()))
    }

    pub fn insert(&mut self, key: &str, value: ParamValue) {
        self.0.insert(key.to_string(), value);
    }

    pub fn get(&self, key: &str) -> Option<&ParamValue> {
        self.0.get(key)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &ParamValue)> {
        self.0.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }

    fn missing(key: &str) -> Error {
        Error::InvalidParameter(format!("missing parameter `{key}`"))
    }

    pub fn real(&self, key: &str) -> Result<f64> {
        match self.get(key) {
            Some(ParamValue::Real(x)) => Ok(*x),
            Some(ParamValue::Seq(v)) if v.len() == 1 => Ok(v[0]),
            Some(other) => Err(Error::InvalidParameter(format!(
                "`{key}` must be a real number, got `{other}`"
            ))),
            None => Err(Self::missing(key)),
        }
    }

    pub fn real_or(&self, key: &str, default: f64) -> Result<f64> {
        if self.contains(key) {
            self.real(key)
        } else {
            Ok(default)
        }
    }

    /// A non-negative integer parameter.
    pub fn count(&self, key: &str) -> Result<usize> {
        let x = self.real(key)?;
        if x < 0.0 || x != x.trunc() || x > 1e9 {
            return Err(Error::InvalidParameter(format!(
                "`{key}` must be a non-negative integer, got {x}"
            )));
        }
        Ok(x as usize)
    }

    pub fn count_or(&self, key: &str, default: usize) -> Result<usize> {
        if self.contains(key) {
            self.count(key)
        } else {
            Ok(default)
        }
    }

    pub fn seq(&self, key: &str) -> Result<Vec<f64>> {
        match self.get(key) {
            Some(ParamValue::Real(x)) => Ok(vec![*x]),
            Some(ParamValue::Seq(v)) => Ok(v.clone()),
            Some(other) => Err(Error::InvalidParameter(format!(
                "`{key}` must be a real sequence, got `{other}`"
            ))),
            None => Err(Self::missing(key)),
        }
    }

    /// A sequence that must have exactly `len` entries.
    pub fn seq_len(&self, key: &str, len: usize) -> Result<Vec<f64>> {
        let v = self.seq(key)?;
        if v.len() != len {
            return Err(Error::InvalidParameter(format!(
                "`{key}` must have {len} entries, got {}",
                v.len()
            )));
        }
        Ok(v)
    }

    pub fn text(&self, key: &str) -> Result<&str> {
        match self.get(key) {
            Some(ParamValue::Text(s)) => Ok(s),
            Some(other) => Err(Error::InvalidParameter(format!(
                "`{key}` must be a name, got `{other}`"
            ))),
            None => Err(Self::missing(key)),
        }
    }

    pub fn text_or<'a>(&'a self, key: &str, default: &'a str) -> Result<&'a str> {
        if self.contains(key) {
            self.text(key)
        } else {
            Ok(default)
        }
    }

    pub fn field(&self) -> Result<Field> {
        match self.get("field") {
            None => Ok(Field::R),
            Some(ParamValue::Text(s)) => s.parse(),
            Some(ParamValue::Real(d)) => Field::from_dim(*d as usize)
                .filter(|_| *d == d.trunc())
                .ok_or_else(|| Error::InvalidParameter(format!("no field of dimension {d}"))),
            Some(other) => Err(Error::InvalidParameter(format!(
                "`field` must be R, C or H, got `{other}`"
            ))),
        }
    }
}

impl fmt::Display for ParamMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accessors() {
        let p = ParamMap::new()
            .with_real("n", 2.0)
            .with_seq("s", &[3.0, 2.0])
            .with_text("field", "C");
        assert_eq!(p.count("n").unwrap(), 2);
        assert_eq!(p.seq_len("s", 2).unwrap(), vec![3.0, 2.0]);
        assert!(p.seq_len("s", 3).is_err());
        assert_eq!(p.field().unwrap(), Field::C);
        assert!(p.real("missing").is_err());
        assert!(ParamMap::new().with_real("n", 1.5).count("n").is_err());
    }

    #[test]
    fn json_shape() {
        let p = ParamMap::new().with_real("alpha", 2.0).with_seq("s", &[1.0, 0.5]);
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, r#"{"alpha":2.0,"s":[1.0,0.5]}"#);
    }
}
