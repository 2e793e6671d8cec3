//! Deterministic one-dimensional quadrature.
//!
//! Two entry points matter for the fading statistics:
//!
//! * [`integrate_theta`] computes the normalized phase average
//!   `(1/π) ∫₀^π f(θ) dθ`. Every mixture representation in this crate is an
//!   integral of this shape with a smooth, bounded integrand, so the default
//!   rule is a fixed 64-node Gauss–Legendre rule. The result is checked
//!   against the half-order rule and recomputed adaptively when the two
//!   disagree.
//! * [`integrate_semi_infinite`] maps `[lower, ∞)` onto `[0, 1)` with
//!   `x = lower − ln(1 − t) / rate` and integrates adaptively. It is used by
//!   the definition-integral oracles and by tail probabilities.
//!
//! The adaptive engine is a global Gauss–Kronrod (10/21) bisection scheme
//! with the classic QUADPACK error heuristics. All routines are free of
//! internal randomness, so identical inputs give bit-identical outputs.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{invalid, Error, Result};

/// Quadrature rule selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRule {
    /// Fixed-order Gauss–Legendre with adaptive fallback.
    FixedGaussLegendre,
    /// Global adaptive Gauss–Kronrod bisection.
    AdaptiveSubdivision,
}

/// Quadrature rule, node count and tolerance contract.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub rule: QuadRule,
    /// Order of the fixed Gauss–Legendre rule.
    pub nodes: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of bisections performed by the adaptive engine.
    pub max_subdivisions: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            rule: QuadRule::FixedGaussLegendre,
            nodes: 64,
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_subdivisions: 400,
        }
    }
}

impl QuadSpec {
    pub fn adaptive() -> Self {
        QuadSpec {
            rule: QuadRule::AdaptiveSubdivision,
            ..QuadSpec::default()
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(invalid("quadrature tolerances must be positive"));
        }
        if self.nodes < 2 {
            return Err(invalid("quadrature needs at least 2 nodes"));
        }
        if self.max_subdivisions == 0 {
            return Err(invalid("max_subdivisions must be positive"));
        }
        Ok(())
    }
}

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the rule by Newton iteration on `P_n` from the Tricomi
    /// initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_and_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Cached rule of order `n`.
    pub fn cached(n: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<RwLock<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(rule) = cache.read().expect("rule cache poisoned").get(&n) {
            return Arc::clone(rule);
        }
        let rule = Arc::new(GaussLegendre::new(n));
        cache
            .write()
            .expect("rule cache poisoned")
            .entry(n)
            .or_insert(rule)
            .clone()
    }

    fn apply<F>(&self, f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = checked(f, mid + half * x)?;
            sum += w * v;
            abs_sum += w * v.abs();
        }
        Ok((sum * half, abs_sum * half.abs()))
    }
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn checked<F>(f: &mut F, x: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let v = f(x)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain(format!("integrand is not finite at {x}")))
    }
}

// Kronrod 21-point abscissae; odd indices are the 10-point Gauss nodes.
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
    0.123_491_976_262_065_851_077_208_932_238_199,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod21<F>(f: &mut F, a: f64, b: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = checked(f, center)?;
    let mut res_g = 0.0;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = checked(f, center - dx)?;
        let f2 = checked(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let abs_value = res_abs * half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if abs_value > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_value);
    }
    Ok(Segment {
        a,
        b,
        value,
        error,
        abs_value,
    })
}

/// Adaptive Gauss–Kronrod integral of a fallible integrand over `[a, b]`.
pub fn try_integrate_adaptive<F>(mut f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    if a == b {
        return Ok(0.0);
    }
    let first = kronrod21(&mut f, a, b)?;
    let mut heap = BinaryHeap::new();
    let mut total = first.value;
    let mut total_err = first.error;
    let mut total_abs = first.abs_value;
    heap.push(first);
    let mut splits = 0;
    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol || total_err <= 50.0 * f64::EPSILON * total_abs {
            return Ok(total);
        }
        if splits >= spec.max_subdivisions {
            return Err(Error::Integration {
                estimate: total,
                error_bound: total_err,
                subdivisions: splits,
            });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval cannot be bisected further in floating point.
            return Err(Error::Integration {
                estimate: total,
                error_bound: total_err,
                subdivisions: splits,
            });
        }
        let left = kronrod21(&mut f, worst.a, mid)?;
        let right = kronrod21(&mut f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_abs += left.abs_value + right.abs_value - worst.abs_value;
        heap.push(left);
        heap.push(right);
        splits += 1;
        // Re-sum periodically so the running totals do not drift.
        if splits % 32 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
            total_abs = heap.iter().map(|s| s.abs_value).sum();
        }
    }
}

/// Adaptive integral of an infallible integrand over `[a, b]`.
pub fn integrate_adaptive<F>(mut f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_adaptive(|x| Ok(f(x)), a, b, spec)
}

/// Integral over `[a, b]` honouring `spec.rule`.
pub fn try_integrate<F>(mut f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    match spec.rule {
        QuadRule::AdaptiveSubdivision => try_integrate_adaptive(f, a, b, spec),
        QuadRule::FixedGaussLegendre => {
            let full = GaussLegendre::cached(spec.nodes);
            let (value, abs_value) = full.apply(&mut f, a, b)?;
            let coarse = GaussLegendre::cached((spec.nodes / 2).max(1));
            let (check, _) = coarse.apply(&mut f, a, b)?;
            // Spectral convergence: the error of the n-point rule is roughly
            // the square of the relative gap to the n/2-point rule.
            let gap = (value - check).abs();
            let scale = value.abs().max(f64::MIN_POSITIVE);
            let rel_gap = gap / scale;
            if gap <= spec.abs_tol
                || rel_gap <= 0.1 * spec.rel_tol.sqrt()
                || gap <= 100.0 * f64::EPSILON * abs_value
            {
                Ok(value)
            } else {
                try_integrate_adaptive(f, a, b, spec)
            }
        }
    }
}

/// `(1/π) ∫₀^π f(θ) dθ` for a fallible integrand.
pub fn try_integrate_theta<F>(f: F, spec: &QuadSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    Ok(try_integrate(f, 0.0, PI, spec)? / PI)
}

/// `(1/π) ∫₀^π f(θ) dθ`.
pub fn integrate_theta<F>(mut f: F, spec: &QuadSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_theta(|t| Ok(f(t)), spec)
}

/// `∫_lower^∞ f(x) dx` through `x = lower − ln(1 − t)/rate`.
///
/// `rate` should not exceed the exponential decay rate of `f`; the
/// transformed integrand is then bounded near `t = 1`. The integral is always
/// evaluated adaptively because the map introduces endpoint singularities
/// for integrands with polynomial factors.
pub fn try_integrate_semi_infinite<F>(
    mut f: F,
    lower: f64,
    rate: f64,
    spec: &QuadSpec,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(invalid("semi-infinite quadrature needs a positive decay rate"));
    }
    try_integrate_adaptive(
        |t| {
            let one_minus = 1.0 - t;
            let x = lower - one_minus.ln() / rate;
            let v = f(x)?;
            if v == 0.0 {
                Ok(0.0)
            } else {
                Ok(v / (rate * one_minus))
            }
        },
        0.0,
        1.0,
        spec,
    )
}

/// Infallible form of [`try_integrate_semi_infinite`].
pub fn integrate_semi_infinite<F>(mut f: F, lower: f64, rate: f64, spec: &QuadSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_semi_infinite(|x| Ok(f(x)), lower, rate, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(10);
        let sum: f64 = rule.weights.iter().sum();
        assert!((sum - 2.0).abs() < 1e-14);
        let m18: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| w * x.powi(18))
            .sum();
        assert!((m18 - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn kronrod_constants_reproduce_moments() {
        // 21-point Kronrod is exact to degree 31, the embedded Gauss rule to 19.
        let mut f = |x: f64| Ok(x.powi(30));
        let seg = kronrod21(&mut f, -1.0, 1.0).unwrap();
        assert!((seg.value - 2.0 / 31.0).abs() < 1e-15);
        let gauss_sum: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((gauss_sum - 2.0).abs() < 1e-15);
        let gauss18: f64 = (0..5).map(|j| 2.0 * WG[j] * XGK[2 * j + 1].powi(18)).sum();
        assert!((gauss18 - 2.0 / 19.0).abs() < 1e-15);
    }

    #[test]
    fn theta_constant_and_cosine() {
        let spec = QuadSpec::default();
        assert!((integrate_theta(|_| 3.5, &spec).unwrap() - 3.5).abs() < 1e-14);
        assert!(integrate_theta(f64::cos, &spec).unwrap().abs() < 1e-14);
        let adaptive = QuadSpec::adaptive();
        assert!(integrate_theta(f64::cos, &adaptive).unwrap().abs() < 1e-14);
    }

    #[test]
    fn theta_appendix_i1_order_zero() {
        let spec = QuadSpec::default();
        let v = integrate_theta(|t| 1.0 / (2.0 + t.cos()), &spec).unwrap();
        assert!((v - 1.0 / 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn semi_infinite_closed_forms() {
        let spec = QuadSpec::default();
        let a = integrate_semi_infinite(|x| (-x).exp(), 0.0, 1.0, &spec).unwrap();
        assert!((a - 1.0).abs() < 1e-12);
        let b = integrate_semi_infinite(|x| x * (-x).exp(), 0.0, 1.0, &spec).unwrap();
        assert!((b - 1.0).abs() < 1e-12);
        let c = integrate_semi_infinite(|x| (-2.0 * x).exp(), 1.0, 1.0, &spec).unwrap();
        assert!((c - (-2f64).exp() / 2.0).abs() < 1e-13);
    }

    #[test]
    fn non_convergence_is_reported() {
        let spec = QuadSpec {
            max_subdivisions: 3,
            ..QuadSpec::adaptive()
        };
        let err = integrate_adaptive(|x| x.sqrt().recip(), 0.0, 1.0, &spec).unwrap_err();
        assert!(matches!(err, Error::Integration { .. }));
    }

    #[test]
    fn invalid_spec_rejected() {
        let spec = QuadSpec {
            rel_tol: 0.0,
            ..QuadSpec::default()
        };
        assert!(integrate_theta(|_| 1.0, &spec).is_err());
        let spec = QuadSpec::default().with_nodes(1);
        assert!(spec.validate().is_err());
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let spec = QuadSpec::default();
        assert!(integrate_theta(|_| f64::NAN, &spec).is_err());
    }
}
