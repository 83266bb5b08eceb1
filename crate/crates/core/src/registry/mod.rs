//! Catalogue of identities with uniform verification and tabulation.

pub mod scalar;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{hermitian_coords, Field};
use crate::error::{Error, Result};
use crate::flag::{
    flag_mc, flag_projectivity_constant, flag_projectivity_published, flag_pushforward_check, flag_quadrature, flag_rhs, triang_dim,
    FlagExponents, PushforwardTest, FLAG_NOTE, FLAG_PROJECTIVITY_NOTE,
};
use crate::integrate::{Engine, LhsEstimate, MCEstimate, QuadOptions, QuadResult, VerdictRule, VerificationReport, Verdict};
use crate::lattice::{
    berezin_psd_probe, berezin_witness_search, random_lattice_set, tamagawa_partial, zeta_lhs_partial, zeta_rhs,
    ZetaParams, DEFAULT_CAP,
};
use crate::params::ParamMap;
use crate::rayleigh::{interp_beta_mc, interp_beta_rhs, interp_beta_rhs_published, theta_beta_mc, theta_beta_rhs, ThetaTable, RAYLEIGH_NOTE};
use crate::special::{riemann_zeta, scalar_closed_form, selberg_closed_form, ScalarIdentity, SelbergParams, SelbergVariant};
use crate::symmetric::eigen::RadialTest;
use crate::symmetric::gindikin::{
    gindikin_beta_mc, gindikin_beta_quadrature, gindikin_gamma_mc, gindikin_gamma_published, gindikin_gamma_quadrature,
    gindikin_n1_values,
    GINDIKIN_CONSTANT_NOTE, GINDIKIN_SIGN_NOTE,
};
use crate::symmetric::hua::{hua_ball_mc, hua_ball_quadrature, hua_ball_reduced, hua_symm_mc, hua_symm_quadrature};
use crate::symmetric::opq::{opq_dim, opq_mc, opq_quadrature, opq_rhs_published, OPQ_EXPERIMENTAL_NOTE, OPQ_NOTE};
use crate::symmetric::projection::{projection_identity_check, ProjectionTest, PROJECTION_NOTE};
use crate::symmetric::wedge::{wedge_mc, wedge_quadrature};
use crate::symmetric::{
    dual_coordinate_check, gindikin_beta_rhs, gindikin_gamma_rhs, hua_ball_rhs, hua_symm_rhs, opq_rhs, wedge_rhs,
};

/// Engine, budget and tolerances of one verification run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunOptions {
    pub engine: Engine,
    pub samples: u64,
    pub seed: u64,
    /// Relative tolerance for deterministic engines.
    pub rel_tol: f64,
    /// Absolute floor for Monte Carlo agreement.
    pub abs_tol: f64,
    /// Cap on the number of enumerated lattices.
    pub cap: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { engine: Engine::Auto, samples: 200_000, seed: 0, rel_tol: 1e-6, abs_tol: 0.0, cap: DEFAULT_CAP }
    }
}

impl RunOptions {
    pub fn rule(&self) -> VerdictRule {
        VerdictRule { rel_tol: self.rel_tol, abs_tol: self.abs_tol }
    }

    fn quad(&self) -> QuadOptions {
        QuadOptions::default().with_rel_tol((0.1 * self.rel_tol).max(1e-13))
    }

    fn pick(&self, quadrature: bool, mc: bool) -> Result<Engine> {
        let chosen = match self.engine {
            Engine::Auto if quadrature => Engine::Quadrature,
            Engine::Auto if mc => Engine::MonteCarlo,
            e => e,
        };
        let ok = match chosen {
            Engine::Quadrature => quadrature,
            Engine::MonteCarlo => mc,
            _ => false,
        };
        if ok {
            Ok(chosen)
        } else {
            Err(Error::Unsupported(format!("engine {} for these parameters", self.engine)))
        }
    }

    fn enumeration(&self) -> Result<()> {
        match self.engine {
            Engine::Auto | Engine::Enumeration => Ok(()),
            e => Err(Error::Unsupported(format!("engine {e} for a lattice sum (use enumeration)"))),
        }
    }
}

/// Kind of value a parameter takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamKind {
    Real,
    Integer,
    Sequence,
    Field,
    Name,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub default: &'static str,
}

const fn ps(name: &'static str, kind: ParamKind, default: &'static str) -> ParamSpec {
    ParamSpec { name, kind, default }
}

use ParamKind::{Field as F, Integer as I, Name as N, Real as R, Sequence as S};

/// Both sides of one identity at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub lhs: LhsEstimate,
    pub rhs: f64,
    pub rhs_im: Option<f64>,
    pub rhs_stderr: Option<f64>,
    pub notes: Vec<String>,
    /// Set by identities whose verdict is not a two-sided comparison.
    pub verdict: Option<Verdict>,
}

impl Evaluation {
    fn new(lhs: LhsEstimate, rhs: f64) -> Self {
        Self { lhs, rhs, rhs_im: None, rhs_stderr: None, notes: Vec::new(), verdict: None }
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }
}

/// A registered identity.
pub struct Identity {
    pub id: &'static str,
    pub label: &'static str,
    pub params: &'static [ParamSpec],
    pub notes: &'static [&'static str],
    rhs: fn(&ParamMap) -> Result<Complex64>,
    evaluate: fn(&ParamMap, &RunOptions) -> Result<Evaluation>,
}

impl Identity {
    /// Default parameter point, filled in under `params`.
    pub fn with_defaults(&self, params: &ParamMap) -> Result<ParamMap> {
        let mut out = ParamMap::new();
        for spec in self.params {
            if spec.default.is_empty() {
                continue;
            }
            out.insert(spec.name, parse_value(spec.kind, spec.default)?);
        }
        for (k, v) in params.iter() {
            if !self.params.iter().any(|s| s.name == k) {
                return Err(Error::InvalidParameter(format!("`{}` takes no parameter `{k}`", self.id)));
            }
            out.insert(k, v.clone());
        }
        Ok(out)
    }

    /// Closed-form right-hand side, where one exists.
    pub fn rhs(&self, params: &ParamMap) -> Result<Complex64> {
        (self.rhs)(&self.with_defaults(params)?)
    }

    pub fn evaluate(&self, params: &ParamMap, opts: &RunOptions) -> Result<Evaluation> {
        (self.evaluate)(&self.with_defaults(params)?, opts)
    }

    pub fn verify(&self, params: &ParamMap, opts: &RunOptions) -> Result<VerificationReport> {
        if opts.samples < 2 {
            return Err(Error::InvalidParameter(format!("samples must be at least 2, got {}", opts.samples)));
        }
        if !(opts.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", opts.rel_tol)));
        }
        let params = self.with_defaults(params)?;
        let ev = (self.evaluate)(&params, opts)?;
        let rule = opts.rule();
        let (z, verdict) = match (ev.lhs.engine, ev.verdict) {
            (_, Some(v)) => (0.0, v),
            (Engine::MonteCarlo, None) => {
                let sigma = ev.lhs.stderr.unwrap_or(0.0).hypot(ev.rhs_stderr.unwrap_or(0.0));
                rule.mc(ev.lhs.value, ev.rhs, sigma)
            }
            (_, None) => {
                let bound = ev.lhs.errbound.unwrap_or(0.0);
                match (ev.lhs.value_im, ev.rhs_im) {
                    (None, None) => rule.deterministic(ev.lhs.value, ev.rhs, bound),
                    (a, b) => rule.deterministic_complex(
                        (ev.lhs.value, a.unwrap_or(0.0)),
                        (ev.rhs, b.unwrap_or(0.0)),
                        bound,
                    ),
                }
            }
        };
        let mut notes: Vec<String> = self.notes.iter().map(|s| s.to_string()).collect();
        notes.extend(ev.notes);
        if published(&params)? {
            notes.push(PUBLISHED_FORM_NOTE.to_string());
        }
        Ok(VerificationReport {
            identity: self.id.to_string(),
            params,
            lhs: ev.lhs,
            rhs: ev.rhs,
            rhs_im: ev.rhs_im,
            rhs_stderr: ev.rhs_stderr,
            z,
            verdict,
            notes,
        })
    }
}

fn parse_value(kind: ParamKind, s: &str) -> Result<crate::params::ParamValue> {
    use crate::params::ParamValue as V;
    let real = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidParameter(format!("`{t}` is not a number")))
    };
    Ok(match kind {
        ParamKind::Real | ParamKind::Integer => V::Real(real(s)?),
        ParamKind::Sequence => V::Seq(s.split(',').map(real).collect::<Result<Vec<_>>>()?),
        ParamKind::Field | ParamKind::Name => V::Text(s.to_string()),
    })
}

/// Parses a command-line style value for parameter `name` of identity `id`.
pub fn parse_param(identity: &Identity, name: &str, value: &str) -> Result<crate::params::ParamValue> {
    let spec = identity
        .params
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::InvalidParameter(format!("`{}` takes no parameter `{name}`", identity.id)))?;
    parse_value(spec.kind, value)
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn no_closed_form(id: &str) -> Error {
    Error::Unsupported(format!("`{id}` has no closed-form right-hand side here"))
}

fn quad_est(q: &QuadResult) -> LhsEstimate {
    LhsEstimate::from_quad(q)
}

fn mc_est(m: &MCEstimate) -> LhsEstimate {
    LhsEstimate::from_mc(m)
}

// scalar identities

/// Note attached to runs with `form=published`.
pub const PUBLISHED_FORM_NOTE: &str = "right-hand side evaluated in the published form";

/// True when the run asks for the published right-hand side.
fn published(p: &ParamMap) -> Result<bool> {
    match p.text_or("form", "corrected")? {
        "corrected" => Ok(false),
        "published" => Ok(true),
        other => Err(Error::InvalidParameter(format!("form must be corrected or published, got `{other}`"))),
    }
}

fn scalar_rhs(which: ScalarIdentity) -> impl Fn(&ParamMap) -> Result<Complex64> {
    move |p| {
        let v = scalar_closed_form(which, p)?;
        Ok(if which == ScalarIdentity::Wilson && published(p)? { 2.0 * v } else { v })
    }
}

fn eval_scalar(which: ScalarIdentity, p: &ParamMap, o: &RunOptions) -> Result<Evaluation> {
    let rhs = scalar_rhs(which)(p)?;
    o.pick(true, false)?;
    let q = o.quad();
    let lhs = match which {
        ScalarIdentity::Euler => quad_est(&scalar::euler_quadrature(p.real("alpha")?, p.real("beta")?, &q)?),
        ScalarIdentity::Cauchy => quad_est(&scalar::cauchy_quadrature(p.real("mu")?, p.real("nu")?, &q)?),
        ScalarIdentity::Beta3 => quad_est(&scalar::halfline_quadrature(p.real("alpha")?, p.real("sigma")?, &q)?),
        ScalarIdentity::Lobachevsky => {
            let (re, im) = scalar::lobachevsky_quadrature(p.real("mu")?, p.real("nu")?, &q)?;
            LhsEstimate::from_quad_complex(&re, &im)
        }
        ScalarIdentity::Wilson => {
            let a = p.seq_len("a", 4)?;
            quad_est(&scalar::wilson_quadrature([a[0], a[1], a[2], a[3]], &q)?)
        }
    };
    let mut ev = Evaluation::new(lhs, rhs.re);
    if which == ScalarIdentity::Lobachevsky {
        ev.rhs_im = Some(rhs.im);
    }
    Ok(ev)
}

// Selberg family

fn selberg_params(p: &ParamMap) -> Result<SelbergParams> {
    Ok(SelbergParams::real(p.count("n")?, p.real("alpha")?, p.real("beta")?, p.real("gamma")?))
}

fn selberg_rhs(v: SelbergVariant) -> impl Fn(&ParamMap) -> Result<Complex64> {
    move |p| selberg_closed_form(v, &selberg_params(p)?)
}

fn eval_selberg(v: SelbergVariant, p: &ParamMap, o: &RunOptions) -> Result<Evaluation> {
    let sp = selberg_params(p)?;
    let rhs = selberg_closed_form(v, &sp)?.re;
    let lhs = match o.pick(sp.n <= 2, true)? {
        Engine::Quadrature => quad_est(&scalar::selberg_quadrature(v, &sp, &o.quad())?),
        _ => mc_est(&scalar::selberg_mc(v, &sp, o.samples, o.seed)?),
    };
    Ok(Evaluation::new(lhs, rhs))
}

// symmetric spaces

fn ball_dims(p: &ParamMap) -> Result<(Field, usize, usize, f64)> {
    Ok((p.field()?, p.count("p")?, p.count("q")?, p.real("lambda")?))
}

fn eval_hua_ball(p: &ParamMap, o: &RunOptions) -> Result<Evaluation> {
    let (field, a, b, lambda) = ball_dims(p)?;
    let rhs = hua_ball_rhs(field, a, b, lambda)?;
    let dim = field.dim() * a * b;
    let lhs = match o.pick(a.min(b) == 1 && dim <= 4, dim <= 8)? {
        Engine::Quadrature => quad_est(&hua_ball_quadrature(field, a, b, lambda, &o.quad())?),
        _ => mc_est(&hua_ball_mc(field, a, b, lambda, o.samples, o.seed)?),
    };
    let mut ev = Evaluation::new(lhs, rhs);
    if field == Field::C {
        ev = ev.note(format!("singular-value reduction gives {:.12e}", hua_ball_reduced(field, a, b, lambda)?));
    }
    Ok(ev)
}

fn symm_params(p: &ParamMap) -> Result<(usize, f64, f64)> {
    let alpha = p.real("alpha")?;
    Ok((p.count("n")?, alpha, p.real_or("beta", alpha)?))
}

fn eval_hua_symm(p: &ParamMap, o: &RunOptions) -> Result<Evaluation> {
    let (n, a, b) = symm_params(p)?;
    let rhs = hua_symm_rhs(n, c(a), c(b))?;
    let lhs = match o.pick(n <= 2, true)? {
        Engine::Quadrature => quad_est(&hua_symm_quadrature(n, a, b, &o.quad())?),
        _ => mc_est(&hua_symm_mc(n, a, b, o.samples, o.seed)?),
    };
    Ok(Evaluation::new(lhs, rhs))
}

fn radial_test(p: &ParamMap) -> Result<RadialTest> {
    match p.text_or("f", "gaussian")? {
        "gaussian" => Ok(RadialTest::Gaussian),
        "hua" => Ok(RadialTest::Hua { alpha: p.real_or("alpha", 2.0)? }),
        "quartic" => Ok(RadialTest::Quartic),
        other => Err(Error::InvalidParameter(format!("unknown test function `{other}` (gaussian, hua, quartic)"))),
    }
}

fn eval_weyl(p: &ParamMap, o: &RunOptions) -> Result<Evaluation> {
    let (field, n, f) = (p.field()?, p.count("n")?, radial_test(p)?);
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    o.pick(false, true)?;
    let r = dual_coordinate_check(field, n, f, o.samples, o.seed)?;
    let mut ev = Evaluation::new(mc_est(&r.matrix), r.eigen.mean);
    ev.rhs_stderr = Some(r.eigen.stderr);
    Ok(ev.note(format!("right-hand side: eigenvalue coordinates with test function {}", f.name())))
}

fn eval_projection(p: &ParamMap, o: &RunOptions) -> Result<Evaluation> {
    let (n, alpha) = (p.count("n")?, p.real("alpha")?);
    let f = ProjectionTest::from_name(p.text_or("f", "one")?)?;
    o.pick(false, true)?;
    let r = projection_identity_check(n, alpha, f, o.samples, o.seed, &o.rule())?;
    let mut ev = Evaluation::new(r.lhs, r.rhs);
    ev.rhs_stderr = r.rhs_stderr;
    ev.notes = r.notes.into_iter().filter(|s| s != PROJECTION_NOTE).collect();
    Ok(ev)
}

fn gamma_rhs(p: &ParamMap) -> Result<Complex64> {
    let (field, s) = (p.field()?, sized_seq(p, "s")?);
    Ok(c(if published(p)? { gindikin_gamma_published(field, &s)? } else { gindikin_gamma_rhs(field, &s)? }))
}

/// Sequence `key`, checked against the optional explicit size `n`.
fn sized_seq(p: &ParamMap, key: &str) -> Result<Vec<f64>> {
    let v = p.seq(key)?;
    if p.contains("n") && p.count("n")? != v.len() {
        return Err(Error::InvalidParameter(format!("n = {} but `{key}` has {} entries", p.count("n")?, v.len())));
    }
    Ok(v)
}

fn gindikin_notes(mut ev: Evaluation, s: &[f64]) -> Result<Evaluation> {
    if s.len() == 1 {
        let (a, b) = gindikin_n1_values(s[0])?;
        ev = ev.note(format!("n = 1: negative exponent gives Γ(s) = {a:.12e}, positive exponent Γ(s+2) = {b:.12e}"));
    }
    Ok(ev)
}

fn eval_gindikin_gamma(p: &ParamMap, o: &RunOptions) -> Result<Evaluation> {
    let (field, s) = (p.field()?, sized_seq(p, "s")?);
    let rhs = gamma_rhs(p)?.re;
    let dim = hermitian_coords::dim(field, s.len());
    let lhs = match o.pick(s.len() <= 2 && dim <= 4, true)? {
        Engine::Quadrature => quad_est(&gindikin_gamma_quadrature(field, &s, &o.quad())?),
        _ => mc_est(&gindikin_gamma_mc(field, &s, o.samples, o.seed)?),
    };
    gindikin_notes(Evaluation::new(lhs, rhs), &s)
}

fn beta_rhs(p: &ParamMap) -> Result<Complex64> {
    let s = sized_seq(p, "s")?;
    Ok(c(gindikin_beta_rhs(p.field()?, &s, &p.seq_len("t", s.len())?)?))
}

fn eval_gindikin_beta(p: &ParamMap, o: &RunOptions) -> Result<Evaluation> {
    let (field, s) = (p.field()?, sized_seq(p, "s")?);
    let t = p.seq_len("t", s.len())?;
    let rhs = gindikin_beta_rhs(field, &s, &t)?;
    let dim = hermitian_coords::dim(field, s.len());
    let lhs = match o.pick(s.len() <= 2 && dim <= 4, true)? {
        Engine::Quadrature => quad_est(&gindikin_beta_quadrature(field, &s, &t, &o.quad())?),
        _ => mc_est(&gindikin_beta_mc(field, &s, &t, o.samples, o.seed)?),
    };
    Ok(Evaluation::new(lhs, rhs))
}

fn wedge_params(p: &ParamMap) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let l = sized_seq(p, "lambda")?;
    let n = l.len();
    Ok((l, p.seq_len("sigma", n)?, p.seq_len("tau", n)?))
}

fn eval_wedge(p: &ParamMap, o: &RunOptions) -> Result<Evaluation> {
    let (l, s, t) = wedge_params(p)?;
    let rhs = wedge_rhs(l.len(), &l, &s, &t)?;
    let lhs = match o.pick(l.len() == 1, true)? {
        Engine::Quadrature => quad_est(&wedge_quadrature(l[0], s[0], t[0], &o.quad())?),
        _ => mc_est(&wedge_mc(&l, &s, &t, o.samples, o.seed)?),
    };
    Ok(Evaluation::new(lhs, rhs))
}

fn opq_rhs_form(p: &ParamMap) -> Result<f64> {
    let (a, b, l, s) = opq_params(p)?;
    if published(p)? {
        opq_rhs_published(a, b, &l, &s)
    } else {
        opq_rhs(a, b, &l, &s)
    }
}

fn opq_params(p: &ParamMap) -> Result<(usize, usize, Vec<f64>, Vec<f64>)> {
    let pp = p.count("p")?;
    Ok((pp, p.count("q")?, p.seq_len("lambda", pp)?, p.seq_len("sigma", pp)?))
}

fn eval_opq(p: &ParamMap, o: &RunOptions) -> Result<Evaluation> {
    let (pp, q, l, s) = opq_params(p)?;
    let rhs = opq_rhs_form(p)?;
    let lhs = match o.pick(pp == 1 && q <= 4, opq_dim(pp, q) > 0)? {
        Engine::Quadrature => quad_est(&opq_quadrature(q, l[0], s[0], &o.quad())?),
        _ => mc_est(&opq_mc(q, &l, &s, o.samples, o.seed)?),
    };
    let mut ev = Evaluation::new(lhs, rhs);
    if pp > 1 {
        ev = ev.note(OPQ_EXPERIMENTAL_NOTE);
    }
    Ok(ev)
}

// lattices

fn zeta_params(p: &ParamMap) -> Result<ZetaParams> {
    let a = sized_seq(p, "alpha")?;
    ZetaParams::new(a.clone(), p.seq_len("beta", a.len())?)
}

fn bound(p: &ParamMap) -> Result<u64> {
    let b = p.count("B")?;
    if b == 0 {
        return Err(Error::InvalidParameter("B must be at least 1".into()));
    }
    Ok(b as u64)
}

fn eval_lattice_zeta(p: &ParamMap, o: &RunOptions) -> Result<Evaluation> {
    let zp = zeta_params(p)?;
    let rhs = zeta_rhs(&zp)?;
    o.enumeration()?;
    let s = zeta_lhs_partial(&zp, bound(p)?, o.cap)?;
    Ok(Evaluation::new(LhsEstimate::from_enumeration(s.value, s.tail, s.terms), rhs)
        .note(format!("partial sum at B/2 = {:.12e}; tail heuristic |S(B) - S(B/2)|", s.half_value)))
}

fn tamagawa_rhs(p: &ParamMap) -> Result<Complex64> {
    match sized_seq(p, "alpha")?.as_slice() {
        [a] => Ok(c(riemann_zeta(*a)?)),
        _ => Err(no_closed_form("tamagawa")),
    }
}

fn eval_tamagawa(p: &ParamMap, o: &RunOptions) -> Result<Evaluation> {
    let a = sized_seq(p, "alpha")?;
    o.enumeration()?;
    let b = bound(p)?;
    let s = tamagawa_partial(&a, b)?;
    let lhs = LhsEstimate::from_enumeration(s.value, s.tail, s.terms);
    if a.len() == 1 {
        if !(a[0] > 1.0) {
            return Err(Error::domain(format!("α₁ = {} must exceed 1", a[0])));
        }
        return Ok(Evaluation::new(lhs, riemann_zeta(a[0])?));
    }
    let doubled = tamagawa_partial(&a, 2 * b)?;
    Ok(Evaluation::new(lhs, doubled.value).note("no closed form: compared with the partial sum at 2B"))
}

fn eval_berezin(p: &ParamMap, o: &RunOptions) -> Result<Evaluation> {
    let (n, alpha) = (p.count("n")?, p.real("alpha")?);
    if !(alpha >= 0.0) {
        return Err(Error::domain(format!("α = {alpha} must be non-negative")));
    }
    o.enumeration()?;
    let (sets, size) = (p.count("sets")?, p.count("size")?);
    let admissible = alpha > n as f64 - 1.0 || (alpha == alpha.trunc() && alpha <= n as f64 - 1.0);
    let mut rng = crate::integrate::chunk_rng(o.seed, 0);
    let mut min = f64::INFINITY;
    for _ in 0..sets {
        let set = random_lattice_set(&mut rng, n, size, 6);
        min = min.min(berezin_psd_probe(&set, alpha)?);
    }
    let mut notes = vec![format!("{sets} random {size}-lattice sets: smallest eigenvalue {min:.6e}")];
    let verdict;
    if admissible {
        verdict = if min >= -1e-10 { Verdict::Pass } else { Verdict::Fail };
    } else {
        let search = berezin_witness_search(n, alpha, size, 4, sets.max(1), -1e-8, o.seed)?;
        min = min.min(search.min_eigenvalue);
        notes.push(format!(
            "α outside the positive-definite set: local search over index ≤ 4 sublattices reached {:.6e}",
            search.min_eigenvalue
        ));
        if search.found {
            let w: Vec<String> = search.witness.iter().map(|l| l.to_string()).collect();
            notes.push(format!("witness: {}", w.join(", ")));
        }
        verdict = if search.found { Verdict::Pass } else { Verdict::Inconclusive };
    }
    let lhs = LhsEstimate {
        value: min,
        value_im: None,
        stderr: None,
        errbound: None,
        engine: Engine::Enumeration,
        samples: sets as u64,
        seed: Some(o.seed),
    };
    let mut ev = Evaluation::new(lhs, 0.0);
    ev.notes = notes;
    ev.verdict = Some(verdict);
    Ok(ev)
}

// Rayleigh tables

fn rayleigh_seqs(p: &ParamMap) -> Result<(Vec<f64>, Vec<f64>)> {
    let s = sized_seq(p, "sigma")?;
    let t = p.seq_len("tau", s.len())?;
    Ok((s, t))
}

fn interp_rhs_form(p: &ParamMap) -> Result<f64> {
    let (s, t) = rayleigh_seqs(p)?;
    let d = p.real("d")?;
    if published(p)? {
        interp_beta_rhs_published(s.len(), &s, &t, d)
    } else {
        interp_beta_rhs(s.len(), &s, &t, d)
    }
}

fn theta_table(p: &ParamMap, n: usize) -> Result<ThetaTable> {
    let v = p.seq("theta")?;
    if v.len() == 1 {
        ThetaTable::constant(n, v[0])
    } else {
        ThetaTable::new(n, v)
    }
}

fn eval_rayleigh_d(p: &ParamMap, o: &RunOptions) -> Result<Evaluation> {
    let (s, t) = rayleigh_seqs(p)?;
    let rhs = interp_rhs_form(p)?;
    let d = p.real("d")?;
    o.pick(false, true)?;
    Ok(Evaluation::new(mc_est(&interp_beta_mc(&s, &t, d, o.samples, o.seed)?), rhs))
}

fn eval_rayleigh_theta(p: &ParamMap, o: &RunOptions) -> Result<Evaluation> {
    let (s, t) = rayleigh_seqs(p)?;
    let th = theta_table(p, s.len())?;
    let rhs = theta_beta_rhs(s.len(), &s, &t, &th)?;
    o.pick(false, true)?;
    Ok(Evaluation::new(mc_est(&theta_beta_mc(&s, &t, &th, o.samples, o.seed)?), rhs))
}

// flags

fn flag_exponents(p: &ParamMap) -> Result<FlagExponents> {
    let n = p.count("n")?;
    let v = p.seq("lambda")?;
    if v.len() == 1 && n > 2 {
        FlagExponents::constant(n, v[0])
    } else {
        FlagExponents::new(n, v)
    }
}

fn eval_flag(p: &ParamMap, o: &RunOptions) -> Result<Evaluation> {
    let (field, l) = (p.field()?, flag_exponents(p)?);
    let rhs = flag_rhs(&l, field)?;
    let lhs = match o.pick(triang_dim(field, l.n()) <= 4, true)? {
        Engine::Quadrature => quad_est(&flag_quadrature(&l, field, &o.quad())?),
        _ => mc_est(&flag_mc(&l, field, o.samples, o.seed)?),
    };
    Ok(Evaluation::new(lhs, rhs))
}

fn projectivity_rhs(p: &ParamMap) -> Result<Complex64> {
    let n = p.count("n")?;
    let (l, field) = (p.seq_len("lambda", n.saturating_sub(1))?, p.field()?);
    Ok(c(if published(p)? {
        flag_projectivity_published(&l, field, n)?
    } else {
        flag_projectivity_constant(&l, field, n)?
    }))
}

fn eval_flag_projectivity(p: &ParamMap, o: &RunOptions) -> Result<Evaluation> {
    let (field, n) = (p.field()?, p.count("n")?);
    let l = p.seq_len("lambda", n.saturating_sub(1))?;
    let constant = projectivity_rhs(p)?.re;
    if n != 2 && published(p)? {
        return Err(Error::InvalidParameter("form=published applies to the n = 2 check".into()));
    }
    match n {
        2 => {
            let ex = FlagExponents::new(2, l.clone())?;
            let lhs = match o.pick(triang_dim(field, 2) <= 4, true)? {
                Engine::Quadrature => quad_est(&flag_quadrature(&ex, field, &o.quad())?),
                _ => mc_est(&flag_mc(&ex, field, o.samples, o.seed)?),
            };
            Ok(Evaluation::new(lhs, constant))
        }
        3 if field == Field::R => {
            o.pick(false, true)?;
            let name = p.text_or("f", "lorentz")?;
            let test = PushforwardTest::ALL
                .into_iter()
                .find(|t| t.name() == name)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown test function `{name}`")))?;
            let r = flag_pushforward_check([l[0], l[1]], test, o.samples, o.seed)?;
            let mut ev = Evaluation::new(mc_est(&r.lhs), r.rhs);
            ev.rhs_stderr = Some(r.rhs_error);
            Ok(ev.note(format!("pushforward to z_12 with test function {name}; constant {constant:.12e}")))
        }
        _ => Err(Error::Unsupported(format!("projectivity check at n = {n} over {field}"))),
    }
}

macro_rules! scalar_entry {
    ($id:literal, $label:literal, $which:expr, [$($p:expr),*]) => {
        Identity {
            id: $id,
            label: $label,
            params: &[$($p),*],
            notes: &[],
            rhs: |p| scalar_rhs($which)(p),
            evaluate: |p, o| eval_scalar($which, p, o),
        }
    };
}

macro_rules! selberg_entry {
    ($id:literal, $label:literal, $v:expr) => {
        Identity {
            id: $id,
            label: $label,
            params: &[ps("n", I, "2"), ps("alpha", R, "2"), ps("beta", R, "2"), ps("gamma", R, "1")],
            notes: &[],
            rhs: |p| selberg_rhs($v)(p),
            evaluate: |p, o| eval_selberg($v, p, o),
        }
    };
}

static REGISTRY: &[Identity] = &[
    scalar_entry!("euler", "Euler beta integral", ScalarIdentity::Euler, [ps("alpha", R, "2"), ps("beta", R, "3")]),
    scalar_entry!("cauchy", "Cauchy beta integral", ScalarIdentity::Cauchy, [ps("mu", R, "1"), ps("nu", R, "1")]),
    scalar_entry!("beta3", "half-line beta integral", ScalarIdentity::Beta3, [ps("alpha", R, "2"), ps("sigma", R, "5")]),
    scalar_entry!(
        "lobachevsky",
        "Lobachevsky sine-power integral",
        ScalarIdentity::Lobachevsky,
        [ps("mu", R, "2"), ps("nu", R, "0.5")]
    ),
    Identity {
        id: "wilson",
        label: "de Branges-Wilson integral",
        params: &[ps("a", S, "1,1,1,1"), ps("form", N, "")],
        notes: &[scalar::WILSON_NOTE],
        rhs: |p| scalar_rhs(ScalarIdentity::Wilson)(p),
        evaluate: |p, o| eval_scalar(ScalarIdentity::Wilson, p, o),
    },
    selberg_entry!("selberg-box", "Selberg integral on the unit cube", SelbergVariant::UnitBox),
    selberg_entry!("selberg-halfline", "Selberg integral on the positive orthant", SelbergVariant::Halfline),
    selberg_entry!("selberg-cauchy", "Cauchy-type Selberg integral", SelbergVariant::Cauchy),
    Identity {
        id: "hua-ball",
        label: "Hua integral over the matrix ball",
        params: &[ps("field", F, "C"), ps("p", I, "1"), ps("q", I, "1"), ps("lambda", R, "1")],
        notes: &[],
        rhs: |p| {
            let (f, a, b, l) = ball_dims(p)?;
            Ok(c(hua_ball_rhs(f, a, b, l)?))
        },
        evaluate: eval_hua_ball,
    },
    Identity {
        id: "hua-symm",
        label: "Hua integral over real symmetric matrices",
        params: &[ps("n", I, "2"), ps("alpha", R, "2"), ps("beta", R, "")],
        notes: &[],
        rhs: |p| {
            let (n, a, b) = symm_params(p)?;
            Ok(c(hua_symm_rhs(n, c(a), c(b))?))
        },
        evaluate: eval_hua_symm,
    },
    Identity {
        id: "weyl",
        label: "eigenvalue reduction on Hermitian matrices",
        params: &[ps("field", F, "R"), ps("n", I, "2"), ps("f", N, "gaussian"), ps("alpha", R, "")],
        notes: &["reduction constant calibrated on exp(-tr X²)"],
        rhs: |_| Err(no_closed_form("weyl")),
        evaluate: eval_weyl,
    },
    Identity {
        id: "projection",
        label: "projection of the symmetric-matrix Hua integral to a corner",
        params: &[ps("n", I, "2"), ps("alpha", R, "2"), ps("f", N, "one")],
        notes: &[PROJECTION_NOTE],
        rhs: |_| Err(no_closed_form("projection")),
        evaluate: eval_projection,
    },
    Identity {
        id: "gindikin-gamma",
        label: "Gindikin gamma integral over the positive cone",
        params: &[ps("field", F, "R"), ps("n", I, ""), ps("s", S, "3,2"), ps("form", N, "")],
        notes: &[GINDIKIN_SIGN_NOTE, GINDIKIN_CONSTANT_NOTE],
        rhs: gamma_rhs,
        evaluate: eval_gindikin_gamma,
    },
    Identity {
        id: "gindikin-beta",
        label: "Gindikin beta integral over the cone interval 0 < X < 1",
        params: &[ps("field", F, "R"), ps("n", I, ""), ps("s", S, "3,2"), ps("t", S, "3,2")],
        notes: &[GINDIKIN_SIGN_NOTE, GINDIKIN_CONSTANT_NOTE],
        rhs: beta_rhs,
        evaluate: eval_gindikin_beta,
    },
    Identity {
        id: "wedge",
        label: "Siegel wedge integral",
        params: &[ps("n", I, ""), ps("lambda", S, "3"), ps("sigma", S, "2"), ps("tau", S, "2")],
        notes: &[],
        rhs: |p| {
            let (l, s, t) = wedge_params(p)?;
            Ok(c(wedge_rhs(l.len(), &l, &s, &t)?))
        },
        evaluate: eval_wedge,
    },
    Identity {
        id: "opq",
        label: "beta integral over the O(p,q) realization",
        params: &[ps("p", I, "1"), ps("q", I, "2"), ps("lambda", S, "3"), ps("sigma", S, "6"), ps("form", N, "")],
        notes: &[OPQ_NOTE],
        rhs: |p| Ok(c(opq_rhs_form(p)?)),
        evaluate: eval_opq,
    },
    Identity {
        id: "lattice-zeta",
        label: "lattice zeta sum over commensurable lattices",
        params: &[ps("n", I, ""), ps("alpha", S, "5"), ps("beta", S, "-3"), ps("B", I, "2000")],
        notes: &[],
        rhs: |p| Ok(c(zeta_rhs(&zeta_params(p)?)?)),
        evaluate: eval_lattice_zeta,
    },
    Identity {
        id: "tamagawa",
        label: "Tamagawa sum over sublattices of Z^n",
        params: &[ps("n", I, ""), ps("alpha", S, "2"), ps("B", I, "100000")],
        notes: &[],
        rhs: tamagawa_rhs,
        evaluate: eval_tamagawa,
    },
    Identity {
        id: "berezin",
        label: "positive definiteness of the Berezin kernel on lattices",
        params: &[ps("n", I, "2"), ps("alpha", R, "3"), ps("sets", I, "20"), ps("size", I, "5")],
        notes: &["probes corroborate or falsify at finite size; they do not prove the characterization"],
        rhs: |_| Err(no_closed_form("berezin")),
        evaluate: eval_berezin,
    },
    Identity {
        id: "rayleigh-d",
        label: "dimension-interpolated beta integral over Rayleigh tables",
        params: &[ps("n", I, ""), ps("sigma", S, "3,3"), ps("tau", S, "3,3"), ps("d", R, "1"), ps("form", N, "")],
        notes: &[RAYLEIGH_NOTE],
        rhs: |p| Ok(c(interp_rhs_form(p)?)),
        evaluate: eval_rayleigh_d,
    },
    Identity {
        id: "rayleigh-theta",
        label: "θ-weighted beta integral over Rayleigh tables",
        params: &[ps("n", I, ""), ps("sigma", S, "3,3"), ps("tau", S, "3,3"), ps("theta", S, "1")],
        notes: &[],
        rhs: |p| {
            let (s, t) = rayleigh_seqs(p)?;
            Ok(c(theta_beta_rhs(s.len(), &s, &t, &theta_table(p, s.len())?)?))
        },
        evaluate: eval_rayleigh_theta,
    },
    Identity {
        id: "flag",
        label: "beta integral over upper unitriangular matrices",
        params: &[ps("field", F, "R"), ps("n", I, "2"), ps("lambda", S, "2")],
        notes: &[FLAG_NOTE],
        rhs: |p| Ok(c(flag_rhs(&flag_exponents(p)?, p.field()?)?)),
        evaluate: eval_flag,
    },
    Identity {
        id: "flag-projectivity",
        label: "projectivity constant of the unitriangular integral",
        params: &[ps("field", F, "R"), ps("n", I, "2"), ps("lambda", S, "2"), ps("f", N, "lorentz"), ps("form", N, "")],
        notes: &[FLAG_PROJECTIVITY_NOTE],
        rhs: projectivity_rhs,
        evaluate: eval_flag_projectivity,
    },
];

/// All registered identities, in a fixed order.
pub fn identities() -> &'static [Identity] {
    REGISTRY
}

pub fn lookup(id: &str) -> Result<&'static Identity> {
    REGISTRY.iter().find(|i| i.id == id).ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// Verifies identity `id` at `params`, with unspecified parameters defaulted.
pub fn verify(id: &str, params: &ParamMap, opts: &RunOptions) -> Result<VerificationReport> {
    lookup(id)?.verify(params, opts)
}

/// Row of `list` output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityInfo {
    pub id: &'static str,
    pub label: &'static str,
    pub arity: usize,
    pub params: Vec<ParamSpec>,
    pub notes: Vec<&'static str>,
}

pub fn list() -> Vec<IdentityInfo> {
    REGISTRY
        .iter()
        .map(|i| IdentityInfo {
            id: i.id,
            label: i.label,
            arity: i.params.len(),
            params: i.params.to_vec(),
            notes: i.notes.to_vec(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_unique_and_defaults_valid() {
        let mut ids: Vec<&str> = REGISTRY.iter().map(|i| i.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), REGISTRY.len());
        for i in REGISTRY {
            let p = i.with_defaults(&ParamMap::new()).unwrap();
            match i.rhs(&p) {
                Ok(v) => assert!(v.re.is_finite(), "{}", i.id),
                Err(e) => assert!(matches!(e, Error::Unsupported(_)), "{}: {e}", i.id),
            }
        }
    }

    #[test]
    fn euler_default() {
        let r = verify("euler", &ParamMap::new(), &RunOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!((r.lhs.value - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn unknown_parameter_and_identity() {
        assert!(matches!(verify("nope", &ParamMap::new(), &RunOptions::default()), Err(Error::UnknownIdentity(_))));
        let p = ParamMap::new().with_real("zeta", 1.0);
        assert!(verify("euler", &p, &RunOptions::default()).unwrap_err().is_invalid_input());
    }

    #[test]
    fn engine_selection() {
        let o = RunOptions { engine: Engine::MonteCarlo, ..RunOptions::default() };
        assert!(matches!(verify("euler", &ParamMap::new(), &o), Err(Error::Unsupported(_))));
        let r = verify("hua-symm", &ParamMap::new().with_real("n", 1.0), &o).unwrap();
        assert_eq!(r.lhs.engine, Engine::MonteCarlo);
    }

    #[test]
    fn gindikin_note_present() {
        let p = ParamMap::new().with_seq("s", &[2.5]);
        let r = verify("gindikin-gamma", &p, &RunOptions { rel_tol: 1e-8, ..RunOptions::default() }).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.notes.iter().any(|n| n == GINDIKIN_SIGN_NOTE));
    }

    #[test]
    fn lobachevsky_complex() {
        let r = verify("lobachevsky", &ParamMap::new(), &RunOptions { rel_tol: 1e-8, ..RunOptions::default() }).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.rhs_im.unwrap() > 0.0);
    }
}
