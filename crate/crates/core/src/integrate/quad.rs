use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_996_892_378_593,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Weights of the embedded 10-point Gauss rule at XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances and budget for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of subintervals per one-dimensional integration.
    pub max_intervals: usize,
    /// Apply x = a + (b-a)(3u² - 2u³) on finite intervals, which turns
    /// square-root endpoint behaviour into smooth behaviour.
    pub smooth_endpoints: bool,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
            max_intervals: 400,
            smooth_endpoints: true,
        }
    }
}

impl QuadOptions {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_intervals(mut self, n: usize) -> Self {
        self.max_intervals = n;
        self
    }
}

/// Value, error bound and evaluation count of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Integration domain given as iterated limits: coordinate k ranges over
/// limits(k, x_0..x_{k-1}). Limits may be infinite.
pub trait Region {
    fn dim(&self) -> usize;
    fn limits(&self, level: usize, outer: &[f64]) -> (f64, f64);
}

/// Axis-aligned box.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxRegion(pub Vec<(f64, f64)>);

impl Region for BoxRegion {
    fn dim(&self) -> usize {
        self.0.len()
    }
    fn limits(&self, level: usize, _outer: &[f64]) -> (f64, f64) {
        self.0[level]
    }
}

/// Region with limits given by a closure.
pub struct IteratedRegion<F> {
    dim: usize,
    limits: F,
}

impl<F: Fn(usize, &[f64]) -> (f64, f64)> IteratedRegion<F> {
    pub fn new(dim: usize, limits: F) -> Self {
        Self { dim, limits }
    }
}

impl<F: Fn(usize, &[f64]) -> (f64, f64)> Region for IteratedRegion<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn limits(&self, level: usize, outer: &[f64]) -> (f64, f64) {
        (self.limits)(level, outer)
    }
}

#[derive(Debug, Clone, Copy)]
struct Outcome {
    value: f64,
    error: f64,
    evaluations: usize,
    converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// Part of `error` that is the rule's own, excluding carried inner errors.
    own: f64,
}

/// Change of variables taking a reference interval onto [lo, hi].
#[derive(Debug, Clone, Copy)]
enum Map {
    Finite { lo: f64, hi: f64 },
    /// x = lo + c·t/(1-t) with c = max(1, |lo|), so the scale follows the endpoint.
    Upper { lo: f64, c: f64 },
    Lower { hi: f64, c: f64 },
    Whole,
}

impl Map {
    fn new(lo: f64, hi: f64) -> Self {
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => Map::Finite { lo, hi },
            (true, false) => Map::Upper { lo, c: lo.abs().max(1.0) },
            (false, true) => Map::Lower { hi, c: hi.abs().max(1.0) },
            (false, false) => Map::Whole,
        }
    }

    fn reference(self) -> (f64, f64) {
        match self {
            Map::Finite { .. } => (0.0, 1.0),
            Map::Upper { .. } | Map::Lower { .. } => (0.0, 1.0),
            Map::Whole => (-1.0, 1.0),
        }
    }

    /// Point and Jacobian for reference coordinate t.
    fn apply(self, t: f64) -> (f64, f64) {
        match self {
            Map::Finite { lo, hi } => (lo + (hi - lo) * t, hi - lo),
            Map::Upper { lo, c } => {
                let s = 1.0 - t;
                (lo + c * t / s, c / (s * s))
            }
            Map::Lower { hi, c } => {
                let s = 1.0 - t;
                (hi - c * t / s, c / (s * s))
            }
            Map::Whole => {
                let s = 1.0 - t * t;
                (t / s, (1.0 + t * t) / (s * s))
            }
        }
    }
}

fn smooth(t: f64, lo: f64, hi: f64) -> (f64, f64) {
    let w = hi - lo;
    let u = (t - lo) / w;
    (lo + w * u * u * (3.0 - 2.0 * u), 6.0 * u * (1.0 - u))
}

fn gauss_kronrod<F: FnMut(f64) -> (f64, f64)>(f: &mut F, a: f64, b: f64) -> (Piece, f64, usize) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [0.0; 21];
    let mut carried = 0.0;
    let (fc, ec) = f(center);
    fv[10] = fc;
    carried += WGK[10] * ec;
    for k in 0..10 {
        let dx = half * XGK[k];
        let (f1, e1) = f(center - dx);
        let (f2, e2) = f(center + dx);
        fv[k] = f1;
        fv[20 - k] = f2;
        carried += WGK[k] * (e1 + e2);
    }
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = WGK[10] * fc.abs();
    for k in 0..10 {
        let s = fv[k] + fv[20 - k];
        resk += WGK[k] * s;
        resabs += WGK[k] * (fv[k].abs() + fv[20 - k].abs());
        if k % 2 == 1 {
            resg += WG[k / 2] * s;
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for k in 0..10 {
        resasc += WGK[k] * ((fv[k] - mean).abs() + (fv[20 - k] - mean).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (
        Piece {
            a,
            b,
            value,
            error: err + carried * half.abs(),
            own: err,
        },
        err,
        21,
    )
}

/// One-dimensional adaptive integration of an integrand that reports its own
/// error (zero for plain functions).
fn adaptive<F: FnMut(f64) -> (f64, f64)>(mut f: F, lo: f64, hi: f64, opts: &QuadOptions) -> Outcome {
    if lo == hi {
        return Outcome {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    if lo > hi {
        let o = adaptive(f, hi, lo, opts);
        return Outcome {
            value: -o.value,
            ..o
        };
    }
    // a far finite endpoint would stretch the map away from the origin
    if (lo == f64::NEG_INFINITY && hi > 1.0) || (hi == f64::INFINITY && lo < -1.0) {
        let a = mapped(&mut f, lo, 0.0, opts);
        let b = mapped(&mut f, 0.0, hi, opts);
        return Outcome {
            value: a.value + b.value,
            error: a.error + b.error,
            evaluations: a.evaluations + b.evaluations,
            converged: a.converged && b.converged,
        };
    }
    mapped(&mut f, lo, hi, opts)
}

fn mapped(f: &mut dyn FnMut(f64) -> (f64, f64), lo: f64, hi: f64, opts: &QuadOptions) -> Outcome {
    let map = Map::new(lo, hi);
    let (ta, tb) = map.reference();
    let smooth_on = opts.smooth_endpoints;
    let mut g = |t: f64| -> (f64, f64) {
        let (t, js) = if smooth_on { smooth(t, ta, tb) } else { (t, 1.0) };
        let (x, jm) = map.apply(t);
        if !x.is_finite() || js == 0.0 {
            return (0.0, 0.0);
        }
        let (v, e) = f(x);
        let j = js * jm;
        (v * j, e * j.abs())
    };
    let mut evaluations = 0;
    let (first, _, n) = gauss_kronrod(&mut g, ta, tb);
    evaluations += n;
    let mut pieces = vec![first];
    loop {
        let value: f64 = pieces.iter().map(|p| p.value).sum();
        let error: f64 = pieces.iter().map(|p| p.error).sum();
        let own: f64 = pieces.iter().map(|p| p.own).sum();
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        // once the carried part dominates, subdividing cannot reduce it
        if error <= target || own <= 0.1 * target || pieces.len() >= opts.max_intervals {
            return Outcome {
                value,
                error,
                evaluations,
                converged: error <= target,
            };
        }
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.own.total_cmp(&b.1.own))
            .expect("non-empty");
        let p = pieces.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // Interval cannot be split further in floating point.
            return Outcome {
                value,
                error,
                evaluations,
                converged: false,
            };
        }
        let (left, _, n1) = gauss_kronrod(&mut g, p.a, mid);
        let (right, _, n2) = gauss_kronrod(&mut g, mid, p.b);
        evaluations += n1 + n2;
        pieces.push(left);
        pieces.push(right);
    }
}

fn nested<R: Region + ?Sized>(
    f: &dyn Fn(&[f64]) -> f64,
    region: &R,
    outer: &[f64],
    opts: &QuadOptions,
) -> Outcome {
    let level = outer.len();
    let (lo, hi) = region.limits(level, outer);
    let last = level + 1 == region.dim();
    let mut x = outer.to_vec();
    x.push(0.0);
    let mut inner_evals = 0;
    let mut all_converged = true;
    // inner errors are carried outward, so inner levels aim below the target
    let inner_opts = QuadOptions {
        rel_tol: 0.1 * opts.rel_tol,
        abs_tol: 0.1 * opts.abs_tol,
        ..*opts
    };
    let mut o = adaptive(
        |t| {
            x[level] = t;
            if last {
                (f(&x), 0.0)
            } else {
                let inner = nested(f, region, &x, &inner_opts);
                inner_evals += inner.evaluations;
                all_converged &= inner.converged;
                (inner.value, inner.error)
            }
        },
        lo,
        hi,
        opts,
    );
    if !last {
        o.evaluations = inner_evals;
        o.converged &= all_converged;
    }
    o
}

/// Adaptive Gauss–Kronrod quadrature over a region of dimension 1 to 4.
/// Inner error estimates are carried into the outer ones. Fails when the
/// error bound exceeds the requested tolerance after the subdivision budget.
pub fn quad_adaptive<R: Region + ?Sized>(
    f: &dyn Fn(&[f64]) -> f64,
    region: &R,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    let dim = region.dim();
    if dim == 0 || dim > 4 {
        return Err(Error::Unsupported(format!(
            "quadrature in dimension {dim} (supported: 1 to 4)"
        )));
    }
    let o = nested(f, region, &[], opts);
    let target = opts.abs_tol.max(opts.rel_tol * o.value.abs());
    if !o.value.is_finite() || !o.error.is_finite() || o.error > target {
        return Err(Error::NoConvergence {
            value: o.value,
            error: o.error,
            evaluations: o.evaluations,
        });
    }
    Ok(QuadResult {
        value: o.value,
        error: o.error,
        evaluations: o.evaluations,
    })
}

/// One-dimensional quadrature over [a, b]; either limit may be infinite.
pub fn quad_1d(f: impl Fn(f64) -> f64, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult> {
    let g = move |x: &[f64]| f(x[0]);
    quad_adaptive(&g, &BoxRegion(vec![(a, b)]), opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn simple_integrals() {
        let o = QuadOptions::default();
        let r = quad_1d(|x| x, 0.0, 1.0, &o).unwrap();
        assert!((r.value - 0.5).abs() < 1e-14);
        let r = quad_1d(|x| 1.0 / (1.0 + x * x), f64::NEG_INFINITY, f64::INFINITY, &o).unwrap();
        assert!((r.value - PI).abs() < 1e-10 * PI);
        assert!(r.error <= 1e-10 * PI);
        let r = quad_1d(|x| (-x).exp(), 0.0, f64::INFINITY, &o).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = quad_1d(|x| x.exp(), f64::NEG_INFINITY, 0.0, &o).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn euler_integrand() {
        let r = quad_1d(|x| x * (1.0 - x) * (1.0 - x), 0.0, 1.0, &QuadOptions::default()).unwrap();
        assert!((r.value - 1.0 / 12.0).abs() < 1e-12 / 12.0);
    }

    #[test]
    fn reversed_limits() {
        let r = quad_1d(|x| x, 1.0, 0.0, &QuadOptions::default()).unwrap();
        assert!((r.value + 0.5).abs() < 1e-14);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let r = quad_1d(|x| x.powf(-0.5), 0.0, 1.0, &QuadOptions::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn disk_area() {
        let region = IteratedRegion::new(2, |level, outer: &[f64]| {
            if level == 0 {
                (-1.0, 1.0)
            } else {
                let h = (1.0 - outer[0] * outer[0]).max(0.0).sqrt();
                (-h, h)
            }
        });
        let r = quad_adaptive(&|_| 1.0, &region, &QuadOptions::default()).unwrap();
        assert!((r.value - PI).abs() < 1e-10);
    }

    #[test]
    fn gaussian_box_3d() {
        let inf = f64::INFINITY;
        let region = BoxRegion(vec![(-inf, inf); 3]);
        let f = |x: &[f64]| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp();
        let r = quad_adaptive(&f, &region, &QuadOptions::default().with_rel_tol(1e-8)).unwrap();
        assert!((r.value - PI.powf(1.5)).abs() < 1e-8 * PI.powf(1.5));
    }

    #[test]
    fn dimension_limit() {
        let region = BoxRegion(vec![(0.0, 1.0); 5]);
        assert!(matches!(
            quad_adaptive(&|_| 1.0, &region, &QuadOptions::default()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let o = QuadOptions::default().with_max_intervals(2).with_rel_tol(1e-15);
        let r = quad_1d(|x| (50.0 * x).sin().abs(), 0.0, 10.0, &o);
        assert!(matches!(r, Err(Error::NoConvergence { .. })));
    }
}
