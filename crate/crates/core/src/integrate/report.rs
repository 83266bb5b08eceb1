use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::integrate::mc::MCEstimate;
use crate::integrate::quad::QuadResult;
use crate::params::ParamMap;

/// Verification engine selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Auto,
    Quadrature,
    #[serde(rename = "mc")]
    MonteCarlo,
    Enumeration,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Auto => "auto",
            Engine::Quadrature => "quadrature",
            Engine::MonteCarlo => "mc",
            Engine::Enumeration => "enumeration",
        })
    }
}

impl FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "auto" => Ok(Engine::Auto),
            "quadrature" | "quad" => Ok(Engine::Quadrature),
            "mc" | "monte-carlo" => Ok(Engine::MonteCarlo),
            "enumeration" | "enum" => Ok(Engine::Enumeration),
            other => Err(Error::InvalidParameter(format!(
                "unknown engine `{other}` (expected auto, quadrature or mc)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Left-hand side as computed by one of the engines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LhsEstimate {
    pub value: f64,
    /// Imaginary part, for identities with complex values.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_im: Option<f64>,
    /// Monte Carlo standard error.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    /// Deterministic error bound (quadrature or enumeration tail).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub errbound: Option<f64>,
    pub engine: Engine,
    pub samples: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl LhsEstimate {
    pub fn from_mc(e: &MCEstimate) -> Self {
        Self {
            value: e.mean,
            value_im: None,
            stderr: Some(e.stderr),
            errbound: None,
            engine: Engine::MonteCarlo,
            samples: e.n_samples,
            seed: Some(e.seed),
        }
    }

    pub fn from_quad(q: &QuadResult) -> Self {
        Self {
            value: q.value,
            value_im: None,
            stderr: None,
            errbound: Some(q.error),
            engine: Engine::Quadrature,
            samples: q.evaluations as u64,
            seed: None,
        }
    }

    pub fn from_quad_complex(re: &QuadResult, im: &QuadResult) -> Self {
        Self {
            value: re.value,
            value_im: Some(im.value),
            stderr: None,
            errbound: Some(re.error.hypot(im.error)),
            engine: Engine::Quadrature,
            samples: (re.evaluations + im.evaluations) as u64,
            seed: None,
        }
    }

    pub fn from_enumeration(value: f64, tail: f64, terms: u64) -> Self {
        Self {
            value,
            value_im: None,
            stderr: None,
            errbound: Some(tail),
            engine: Engine::Enumeration,
            samples: terms,
            seed: None,
        }
    }
}

/// Outcome of checking one identity at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub params: ParamMap,
    pub lhs: LhsEstimate,
    pub rhs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs_im: Option<f64>,
    /// Standard error of the right-hand side when it is itself estimated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs_stderr: Option<f64>,
    pub z: f64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Tolerances used to turn an estimate into a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerdictRule {
    /// Relative tolerance for deterministic engines.
    pub rel_tol: f64,
    /// Absolute floor for Monte Carlo agreement.
    pub abs_tol: f64,
}

impl Default for VerdictRule {
    fn default() -> Self {
        Self { rel_tol: 1e-6, abs_tol: 0.0 }
    }
}

impl VerdictRule {
    /// Monte Carlo: pass iff |Δ| ≤ max(3σ, abs_tol); inconclusive when
    /// σ > |rhs|/2. With both sides estimated σ is the combined error.
    pub fn mc(&self, lhs: f64, rhs: f64, sigma: f64) -> (f64, Verdict) {
        let delta = lhs - rhs;
        let z = if sigma > 0.0 { delta / sigma } else if delta == 0.0 { 0.0 } else { f64::INFINITY.copysign(delta) };
        let verdict = if !(lhs.is_finite() && rhs.is_finite() && sigma.is_finite()) {
            Verdict::Inconclusive
        } else if sigma > 0.5 * rhs.abs() && rhs != 0.0 {
            Verdict::Inconclusive
        } else if delta.abs() <= (3.0 * sigma).max(self.abs_tol) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        (z, verdict)
    }

    /// Deterministic engines: pass iff |Δ| ≤ rel_tol·|rhs| (or abs_tol when
    /// rhs = 0); inconclusive when the engine's own bound exceeds that.
    pub fn deterministic(&self, lhs: f64, rhs: f64, bound: f64) -> (f64, Verdict) {
        let delta = lhs - rhs;
        let allowed = (self.rel_tol * rhs.abs()).max(self.abs_tol);
        let z = if bound > 0.0 { delta / bound } else if delta == 0.0 { 0.0 } else { f64::INFINITY.copysign(delta) };
        let verdict = if !(lhs.is_finite() && rhs.is_finite()) {
            Verdict::Inconclusive
        } else if delta.abs() <= allowed {
            Verdict::Pass
        } else if bound > allowed {
            Verdict::Inconclusive
        } else {
            Verdict::Fail
        };
        (z, verdict)
    }

    /// The deterministic rule applied to |lhs - rhs| for complex values.
    pub fn deterministic_complex(&self, lhs: (f64, f64), rhs: (f64, f64), bound: f64) -> (f64, Verdict) {
        let delta = (lhs.0 - rhs.0).hypot(lhs.1 - rhs.1);
        let modulus = rhs.0.hypot(rhs.1);
        self.deterministic(modulus + delta, modulus, bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mc_rule() {
        let r = VerdictRule::default();
        assert_eq!(r.mc(1.01, 1.0, 0.01).1, Verdict::Pass);
        assert_eq!(r.mc(1.05, 1.0, 0.01).1, Verdict::Fail);
        assert_eq!(r.mc(1.05, 1.0, 0.6).1, Verdict::Inconclusive);
        let loose = VerdictRule { abs_tol: 0.1, ..r };
        assert_eq!(loose.mc(1.05, 1.0, 0.01).1, Verdict::Pass);
    }

    #[test]
    fn deterministic_rule() {
        let r = VerdictRule { rel_tol: 1e-8, abs_tol: 0.0 };
        assert_eq!(r.deterministic(1.0 + 1e-9, 1.0, 1e-12).1, Verdict::Pass);
        assert_eq!(r.deterministic(1.0 + 1e-6, 1.0, 1e-12).1, Verdict::Fail);
        assert_eq!(r.deterministic(1.0 + 1e-6, 1.0, 1e-3).1, Verdict::Inconclusive);
    }

    #[test]
    fn engine_names() {
        for e in [Engine::Auto, Engine::Quadrature, Engine::MonteCarlo, Engine::Enumeration] {
            assert_eq!(e.to_string().parse::<Engine>().unwrap(), e);
        }
        assert_eq!(serde_json::to_string(&Engine::MonteCarlo).unwrap(), "\"mc\"");
    }
}
