//! Scalar special functions used by the closed-form fading statistics.
//!
//! Everything here is real-valued and restricted to the parameter regions
//! the fading formulas actually visit: confluent functions with
//! non-negative argument paired with a dominating exponential decay, Gauss
//! functions with non-positive argument, Legendre functions on `[1, ∞)`,
//! and the bivariate confluent function `Φ₂` with non-positive arguments.

use std::f64::consts::{LN_10, PI};

use crate::error::{domain, Error, Result};
use crate::quad::{try_integrate_adaptive, QuadSpec};

/// Value that may be returned in log-magnitude form when it would overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    /// Linear value, or `ln |value|` when `log_scaled` is set.
    pub value: f64,
    pub log_scaled: bool,
    /// Sign of the represented value (`1.0`, `-1.0`, or `0.0`).
    pub sign: f64,
}

impl EvalResult {
    fn linear(value: f64) -> Self {
        EvalResult {
            value,
            log_scaled: false,
            sign: sign_of(value),
        }
    }

    /// `ln |value|`, whatever the representation.
    pub fn ln_abs(&self) -> f64 {
        if self.log_scaled {
            self.value
        } else {
            self.value.abs().ln()
        }
    }

    /// Linear value (may be infinite if the log form overflows).
    pub fn to_linear(&self) -> f64 {
        if self.log_scaled {
            self.sign * self.value.exp()
        } else {
            self.value
        }
    }
}

fn sign_of(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Compensated (Neumaier) accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }

    fn scale(&mut self, f: f64) {
        self.sum *= f;
        self.comp *= f;
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

const STIRLING_SHIFT: f64 = 15.0;

/// `ln Γ(x)` for `x > 0`.
///
/// Upward recurrence to `x ≥ 15` followed by the Stirling series. Relative
/// error is below `1e-13` away from the zeros at `x = 1` and `x = 2`, where
/// the error is absolute (~1e-15).
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("ln_gamma requires a positive finite argument, got {x}")));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    let mut y = x;
    let mut prod = 1.0;
    while y < STIRLING_SHIFT {
        prod *= y;
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    // Bernoulli terms B_{2k} / (2k (2k-1) y^{2k-1}), k = 1..8.
    let series = inv
        * (1.0 / 12.0
            + inv2
                * (-1.0 / 360.0
                    + inv2
                        * (1.0 / 1260.0
                            + inv2
                                * (-1.0 / 1680.0
                                    + inv2
                                        * (1.0 / 1188.0
                                            + inv2
                                                * (-691.0 / 360_360.0
                                                    + inv2
                                                        * (1.0 / 156.0
                                                            + inv2 * (-3617.0 / 122_400.0))))))));
    let stirling = (y - 0.5) * y.ln() - y + 0.5 * (2.0 * PI).ln() + series;
    Ok(stirling - prod.ln())
}

/// Pochhammer symbol `(a)_n = a (a+1) ⋯ (a+n−1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (a + k as f64))
}

/// `n!` as a float.
pub fn factorial(n: u32) -> f64 {
    pochhammer(1.0, n)
}

/// Binomial coefficient `C(n, k)` as a float.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `ln ₁F₁(a; b; z)` for `z ≥ 0`, by rescaled power series.
///
/// Terms are positive once `k > −a`, so the series is summed directly and
/// renormalized whenever the partial sum grows past `1e280`.
pub fn hyp1f1_log(a: f64, b: f64, z: f64) -> Result<EvalResult> {
    if is_nonpositive_integer(b) {
        return Err(domain(format!("1F1 undefined for b = {b}")));
    }
    if !(z >= 0.0) || !z.is_finite() || !a.is_finite() || !b.is_finite() {
        return Err(domain(format!("1F1 requires finite z >= 0, got {z}")));
    }
    const RESCALE: f64 = 1e280;
    let mut sum = KahanSum::default();
    sum.add(1.0);
    let mut term = 1.0;
    let mut log_scale = 0.0;
    let max_terms = (z + 60.0 * z.sqrt() + a.abs() + 500.0) as usize;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        let ratio = (a + kf) * z / ((b + kf) * (kf + 1.0));
        term *= ratio;
        sum.add(term);
        k += 1;
        let s = sum.value();
        if s.abs() > RESCALE {
            sum.scale(1.0 / RESCALE);
            term /= RESCALE;
            log_scale += 280.0 * LN_10;
        }
        if term == 0.0 {
            break;
        }
        let past_peak = kf + 1.0 > z && ratio.abs() < 1.0;
        if past_peak && term.abs() <= 1e-17 * sum.value().abs() {
            break;
        }
        if k > max_terms {
            return Err(Error::Range(format!(
                "1F1({a}; {b}; {z}) series did not converge in {max_terms} terms"
            )));
        }
    }
    let s = sum.value();
    if log_scale == 0.0 {
        return Ok(EvalResult::linear(s));
    }
    Ok(EvalResult {
        value: s.abs().ln() + log_scale,
        log_scaled: true,
        sign: sign_of(s),
    })
}

/// `exp(−decay) · ₁F₁(a; b; z)` for `z ≥ 0`, without intermediate overflow.
///
/// The fading densities always pair `₁F₁` with a decaying exponential whose
/// rate dominates the series growth (`decay ≥ z`).
pub fn hyp1f1_scaled(a: f64, b: f64, z: f64, decay: f64) -> Result<f64> {
    if !(decay >= 0.0) {
        return Err(domain(format!("decay must be non-negative, got {decay}")));
    }
    let f = hyp1f1_log(a, b, z)?;
    if !f.log_scaled && f.value.is_finite() && decay < 700.0 {
        return Ok(f.value * (-decay).exp());
    }
    let ln = f.ln_abs() - decay;
    let v = f.sign * ln.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Range(format!(
            "exp(-{decay}) 1F1({a}; {b}; {z}) overflows; decay must dominate z"
        )))
    }
}

/// Power series of `₂F₁(a, b; c; x)` for `0 ≤ x < 1`.
fn hyp2f1_series(a: f64, b: f64, c: f64, x: f64, max_terms: usize) -> Result<f64> {
    let mut sum = KahanSum::default();
    sum.add(1.0);
    let mut term = 1.0;
    let settle = (a.abs() + b.abs() + c.abs()) as usize + 2;
    for k in 0..max_terms {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        term *= ratio;
        if term == 0.0 {
            return Ok(sum.value());
        }
        sum.add(term);
        if k >= settle && ratio.abs() < 1.0 {
            let r = ratio.abs().max(x);
            let tail = term.abs() * r / (1.0 - r);
            if tail <= 1e-17 * sum.value().abs() {
                return Ok(sum.value());
            }
        }
    }
    Err(Error::Range(format!(
        "2F1({a}, {b}; {c}; {x}) series did not converge in {max_terms} terms"
    )))
}

/// Euler integral `Γ(c)/(Γ(b)Γ(c−b)) ∫₀¹ t^{b−1}(1−t)^{c−b−1}(1−tz)^{−a} dt`
/// for `c > b > 0` and `z < 1`.
fn hyp2f1_euler(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let d = c - b;
    let prefactor = (ln_gamma(c)? - ln_gamma(b)? - ln_gamma(d)?).exp();
    let spec = QuadSpec::adaptive().with_rel_tol(1e-13);
    if b >= 0.5 && d >= 0.5 {
        // t = sin²φ leaves a bounded integrand on [0, π/2].
        let (pb, pd) = (2.0 * b - 1.0, 2.0 * d - 1.0);
        let integral = try_integrate_adaptive(
            |phi: f64| {
                let (s, co) = phi.sin_cos();
                let t = s * s;
                Ok(s.powf(pb) * co.powf(pd) * (1.0 - z * t).powf(-a))
            },
            0.0,
            0.5 * PI,
            &spec,
        )?;
        return Ok(2.0 * prefactor * integral);
    }
    // Split at t = 1/2; t = w^{1/b} and 1 − t = w^{1/d} absorb the endpoint
    // singularities.
    let left = try_integrate_adaptive(
        |w: f64| {
            let t = w.powf(1.0 / b);
            Ok((1.0 - t).powf(d - 1.0) * (1.0 - z * t).powf(-a) / b)
        },
        0.0,
        0.5f64.powf(b),
        &spec,
    )?;
    let right = try_integrate_adaptive(
        |w: f64| {
            let t = 1.0 - w.powf(1.0 / d);
            Ok(t.powf(b - 1.0) * (1.0 - z * t).powf(-a) / d)
        },
        0.0,
        0.5f64.powf(d),
        &spec,
    )?;
    Ok(prefactor * (left + right))
}

/// Largest Pfaff-transformed argument summed as a plain series before the
/// Euler integral takes over.
const PFAFF_SERIES_MAX: f64 = 0.5;

/// Gauss hypergeometric `₂F₁(a, b; c; z)` for `z ≤ 0`.
///
/// * `a` or `b` a non-positive integer: terminating polynomial.
/// * Pfaff argument `z/(z−1) ≤ 1/2`: `(1−z)^{−a} ₂F₁(a, c−b; c; z/(z−1))`
///   as a power series.
/// * otherwise, with `c > b > 0` (or `c > a > 0`): Euler integral by
///   adaptive quadrature.
/// * otherwise: the Pfaff series with an extended term budget.
pub fn hyp2f1_nonpos(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if !(z <= 0.0) || !z.is_finite() {
        return Err(domain(format!("hyp2f1_nonpos requires finite z <= 0, got {z}")));
    }
    if !a.is_finite() || !b.is_finite() || !c.is_finite() {
        return Err(domain("2F1 parameters must be finite"));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let terminating = [a, b].into_iter().filter(|p| is_nonpositive_integer(*p)).fold(
        None,
        |acc: Option<f64>, p| Some(acc.map_or(p, |q| q.max(p))),
    );
    if let Some(p) = terminating {
        let degree = (-p) as u32;
        if is_nonpositive_integer(c) && -c < degree as f64 {
            return Err(domain(format!("2F1 undefined: c = {c} hits a pole before the series terminates")));
        }
        let mut sum = KahanSum::default();
        let mut term = 1.0;
        sum.add(term);
        for k in 0..degree {
            let kf = k as f64;
            term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
            sum.add(term);
        }
        return Ok(sum.value());
    }
    if is_nonpositive_integer(c) {
        return Err(domain(format!("2F1 undefined for c = {c}")));
    }
    let x = z / (z - 1.0);
    let pfaff = |max_terms| -> Result<f64> {
        Ok((1.0 - z).powf(-a) * hyp2f1_series(a, c - b, c, x, max_terms)?)
    };
    if x <= PFAFF_SERIES_MAX {
        return pfaff(10_000);
    }
    if c > b && b > 0.0 {
        return hyp2f1_euler(a, b, c, z);
    }
    if c > a && a > 0.0 {
        return hyp2f1_euler(b, a, c, z);
    }
    pfaff(1_000_000).map_err(|e| match e {
        Error::Range(msg) => Error::Domain(format!(
            "parameter region not covered (no Euler representation and slow Pfaff series): {msg}"
        )),
        other => other,
    })
}

/// Legendre function of the first kind `P_v(x)` for real degree and `x ≥ 1`.
///
/// Uses `P_v(x) = ₂F₁(−v, v+1; 1; (1−x)/2)`, whose argument is non-positive
/// on this range, and the reflection `P_v = P_{−v−1}` for `v < −1/2`.
pub fn legendre_p(v: f64, x: f64) -> Result<f64> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(domain(format!("legendre_p requires finite x >= 1, got {x}")));
    }
    if !v.is_finite() {
        return Err(domain("legendre_p degree must be finite"));
    }
    let v = if v < -0.5 { -v - 1.0 } else { v };
    if x == 1.0 || v == 0.0 {
        return Ok(1.0);
    }
    hyp2f1_nonpos(-v, v + 1.0, 1.0, 0.5 * (1.0 - x))
}

/// Largest `|x|` accepted by [`phi2_neg`]; the transformed series reaches
/// `e^{|x|}` before the prefactor `e^{x}` brings it back.
pub const PHI2_MAX_ARG: f64 = 600.0;

/// Largest tolerated ratio between the sum of absolute terms and the
/// absolute sum; beyond it fewer than ~8 significant digits survive.
pub const PHI2_MAX_CANCELLATION: f64 = 1e7;

/// Bivariate confluent hypergeometric function
/// `Φ₂(b1, b2; c; x, y) = Σ_{j,k} (b1)_j (b2)_k x^j y^k / ((c)_{j+k} j! k!)`
/// for `x, y ≤ 0`.
///
/// With `x ≤ y ≤ 0` (swapping `(b1, x) ↔ (b2, y)` if needed) the function
/// is evaluated as `e^{x} Φ₂(c−b1−b2, b2; c; −x, y−x)`, whose arguments are
/// non-negative. For positive transformed parameters every term is
/// positive. Reliable region: `max(|x|, |y|) ≤ PHI2_MAX_ARG` and cancellation
/// in the transformed series below `PHI2_MAX_CANCELLATION`; outside it a
/// range error is returned and callers should use the quadrature path.
pub fn phi2_neg(b1: f64, b2: f64, c: f64, x: f64, y: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(domain(format!("phi2_neg requires c > 0, got {c}")));
    }
    if !(x <= 0.0) || !(y <= 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(domain(format!("phi2_neg requires finite x, y <= 0, got ({x}, {y})")));
    }
    if x == 0.0 && y == 0.0 {
        return Ok(1.0);
    }
    let (b1, b2, x, y) = if x <= y { (b1, b2, x, y) } else { (b2, b1, y, x) };
    if -x > PHI2_MAX_ARG {
        return Err(Error::Range(format!(
            "phi2 argument {x} beyond series reliability bound {PHI2_MAX_ARG}; use the quadrature path"
        )));
    }
    let (sum, abs_sum) = phi2_series_nonneg(c - b1 - b2, b2, c, -x, y - x)?;
    if abs_sum > PHI2_MAX_CANCELLATION * sum.abs() {
        return Err(Error::Range(format!(
            "phi2 series cancellation {:.1e} too severe; use the quadrature path",
            abs_sum / sum.abs()
        )));
    }
    Ok(x.exp() * sum)
}

/// Double series with `u, v ≥ 0`. Returns `(sum, Σ|terms|)`.
fn phi2_series_nonneg(p: f64, q: f64, c: f64, u: f64, v: f64) -> Result<(f64, f64)> {
    let mut total = KahanSum::default();
    let mut total_abs = 0.0;
    let mut row_head = 1.0;
    let max_j = (u + 60.0 * u.sqrt() + p.abs() + 200.0) as usize;
    let max_k = (v + 60.0 * v.sqrt() + q.abs() + 200.0) as usize;
    for j in 0..=max_j {
        let jf = j as f64;
        if j > 0 {
            row_head *= (p + jf - 1.0) * u / ((c + jf - 1.0) * jf);
        }
        if row_head == 0.0 {
            return Ok((total.value(), total_abs));
        }
        let mut row = KahanSum::default();
        let mut row_abs = 0.0;
        let mut term = row_head;
        for k in 0..=max_k {
            let kf = k as f64;
            if k > 0 {
                term *= (q + kf - 1.0) * v / ((c + jf + kf - 1.0) * kf);
            }
            row.add(term);
            row_abs += term.abs();
            if term == 0.0 {
                break;
            }
            let next_ratio = ((q + kf) * v / ((c + jf + kf) * (kf + 1.0))).abs();
            if kf > q.abs() && next_ratio < 1.0 && term.abs() <= 1e-17 * row_abs {
                break;
            }
            if k == max_k {
                return Err(Error::Range("phi2 inner series did not converge".into()));
            }
        }
        total.add(row.value());
        total_abs += row_abs;
        let head_ratio = ((p + jf) * u / ((c + jf) * (jf + 1.0))).abs();
        if jf > p.abs() && jf > u && head_ratio < 1.0 && row_abs <= 1e-17 * total_abs {
            return Ok((total.value(), total_abs));
        }
    }
    Err(Error::Range("phi2 outer series did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn ln_gamma_values() {
        assert_eq!(ln_gamma(1.0).unwrap(), 0.0);
        assert!((ln_gamma(0.5).unwrap() - PI.sqrt().ln()).abs() < 1e-14);
        // mpmath.loggamma(10.5) at 50 digits
        assert!(rel(ln_gamma(10.5).unwrap(), 13.940_625_219_403_763_633_161_237_887_971_85) < 1e-13);
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-1.5).is_err());
    }

    #[test]
    fn ln_gamma_matches_factorials() {
        for n in 1..40u32 {
            let exact: f64 = (1..n).map(|k| (k as f64).ln()).sum();
            assert!((ln_gamma(n as f64).unwrap() - exact).abs() < 1e-13 * exact.max(1.0));
        }
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(3.0, 0), 1.0);
        assert_eq!(pochhammer(2.5, 3), 39.375);
        let via_gamma = (ln_gamma(21.5).unwrap() - ln_gamma(1.5).unwrap()).exp();
        assert!(rel(pochhammer(1.5, 20), via_gamma) < 1e-12);
    }

    #[test]
    fn hyp1f1_scaled_values() {
        assert_eq!(hyp1f1_scaled(2.3, 1.0, 0.0, 0.0).unwrap(), 1.0);
        for z in [0.5, 10.0, 300.0, 2000.0, 10_000.0] {
            let v = hyp1f1_scaled(1.0, 1.0, z, z).unwrap();
            assert!((v - 1.0).abs() < 1e-10, "z = {z}: {v}");
        }
        // mpmath: exp(-80) * hyp1f1(2.5, 1, 50)
        let v = hyp1f1_scaled(2.5, 1.0, 50.0, 80.0).unwrap();
        assert!(rel(v, 2.601_042_632_662_815_130_888_055_757e-11) < 1e-10);
        assert!(hyp1f1_scaled(1.0, -2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn hyp1f1_large_argument_kummer_check() {
        // exp(-z) 1F1(a; b; z) = 1F1(b - a; b; -z); with b - a = -1 the right side is 1 + z/b.
        for z in [100.0, 900.0, 5000.0] {
            let v = hyp1f1_scaled(3.0, 2.0, z, z).unwrap();
            assert!(rel(v, 1.0 + z / 2.0) < 1e-10, "z = {z}");
        }
    }

    #[test]
    fn hyp2f1_values() {
        assert_eq!(hyp2f1_nonpos(1.3, 2.2, 3.1, 0.0).unwrap(), 1.0);
        assert_eq!(hyp2f1_nonpos(-2.0, 1.0, 1.0, -1.0).unwrap(), 4.0);
        // mpmath quadrature of the Euler integral
        let v = hyp2f1_nonpos(3.5, 0.5, 1.5, -0.7).unwrap();
        assert!(rel(v, 0.582_433_389_454_565_969_696_916_815) < 1e-10);
        assert!(hyp2f1_nonpos(1.0, 1.0, 1.0, 0.5).is_err());
        assert!(hyp2f1_nonpos(1.0, 1.0, -2.0, -0.5).is_err());
    }

    #[test]
    fn legendre_values() {
        assert_eq!(legendre_p(2.7, 1.0).unwrap(), 1.0);
        assert_eq!(legendre_p(0.0, 5.0).unwrap(), 1.0);
        // mpmath quadrature of (1/π)∫(x + √(x²−1) cos φ)^v dφ
        let v = legendre_p(1.5, 2.0).unwrap();
        assert!(rel(v, 3.243_939_666_040_804_915_450_228_793) < 1e-10);
        assert!(legendre_p(1.0, 0.9).is_err());
    }

    #[test]
    fn legendre_reflection() {
        for x in [1.2, 3.0, 20.0] {
            let a = legendre_p(-0.3, x).unwrap();
            let b = legendre_p(-0.7, x).unwrap();
            assert!(rel(a, b) < 1e-13);
        }
    }

    #[test]
    fn phi2_values() {
        assert_eq!(phi2_neg(0.3, 0.4, 2.0, 0.0, 0.0).unwrap(), 1.0);
        let x = -0.8;
        assert!(rel(phi2_neg(-1.0, 2.0, 2.0, x, 0.0).unwrap(), 1.0 - x / 2.0) < 1e-13);
        // mpmath double series, 50 digits
        assert!(rel(phi2_neg(-1.0, 2.0, 2.0, -0.5, -1.0).unwrap(), 0.5) < 1e-8);
        let v = phi2_neg(0.3, 1.7, 2.5, -3.0, -1.2).unwrap();
        assert!(rel(v, 0.337_516_386_688_820_229_612_181_996_8) < 1e-8);
    }

    #[test]
    fn phi2_region_errors() {
        assert!(phi2_neg(1.0, 1.0, 2.0, 0.5, -1.0).is_err());
        assert!(phi2_neg(1.0, 1.0, 0.0, -0.5, -1.0).is_err());
        let err = phi2_neg(-0.5, 1.5, 2.0, -700.0, -10.0).unwrap_err();
        assert!(matches!(err, Error::Range(_)));
    }

    #[test]
    fn phi2_equal_arguments_collapse_to_1f1() {
        // Φ₂(b1, b2; c; x, x) = ₁F₁(b1 + b2; c; x) = e^x ₁F₁(c − b1 − b2; c; −x)
        let (b1, b2, c) = (-0.5, 1.5, 2.0);
        for x in [-1.0f64, -25.0, -300.0] {
            let direct = phi2_neg(b1, b2, c, x, x).unwrap();
            let kummer = hyp1f1_scaled(c - b1 - b2, c, -x, -x).unwrap();
            assert!(rel(direct, kummer) < 1e-10, "x = {x}");
        }
    }
}
