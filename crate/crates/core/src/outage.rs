//! Outage probability under co-channel interference.
//!
//! Scenario A: one FTR link (integer `m`) with `L` equal-power Rayleigh
//! interferers and background noise. Scenario B: `N`-branch maximal ratio
//! combining of i.i.d. FTR branches (any `m`) limited by `L` Rayleigh
//! interferers.

use crate::error::{invalid, Error, Result};
use crate::ftr::{ftr_gmgf, lift_nakagami, nakagami_igmgf_ln};
use crate::models::{nakagami_cdf, FtrParams};
use crate::quad::QuadSpec;
use crate::specfun::{factorial, ln_gamma};

/// Signal-plus-noise link with co-channel interference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioA {
    /// Desired-signal channel; `gamma_bar` is the mean signal power `W̄`.
    pub channel: FtrParams,
    pub l_interferers: u32,
    /// Mean power of each interferer.
    pub p_i: f64,
    /// Background noise power.
    pub n0: f64,
    /// Linear SINR threshold (zero never triggers an outage).
    pub r_th: f64,
}

impl ScenarioA {
    pub fn new(channel: FtrParams, l_interferers: u32, p_i: f64, n0: f64, r_th: f64) -> Result<Self> {
        let sc = ScenarioA {
            channel,
            l_interferers,
            p_i,
            n0,
            r_th,
        };
        sc.validate()?;
        Ok(sc)
    }

    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        self.channel.integer_m()?;
        check_common(self.l_interferers, self.p_i)?;
        if !(self.n0 >= 0.0) || !self.n0.is_finite() {
            return Err(invalid(format!("noise power must be non-negative, got {}", self.n0)));
        }
        check_threshold(self.r_th)
    }
}

/// Interference-limited MRC receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioB {
    /// Per-branch channel; `gamma_bar` is the per-antenna mean power `W̄`.
    pub channel: FtrParams,
    pub n_antennas: u32,
    pub l_interferers: u32,
    pub p_i: f64,
    /// Linear SIR threshold.
    pub r_th_hat: f64,
}

impl ScenarioB {
    pub fn new(
        channel: FtrParams,
        n_antennas: u32,
        l_interferers: u32,
        p_i: f64,
        r_th_hat: f64,
    ) -> Result<Self> {
        let sc = ScenarioB {
            channel,
            n_antennas,
            l_interferers,
            p_i,
            r_th_hat,
        };
        sc.validate()?;
        Ok(sc)
    }

    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        if self.n_antennas < 1 {
            return Err(invalid("at least one antenna is required"));
        }
        check_common(self.l_interferers, self.p_i)?;
        check_threshold(self.r_th_hat)
    }
}

/// Either outage configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OutageScenario {
    A(ScenarioA),
    B(ScenarioB),
}

fn check_common(l: u32, p_i: f64) -> Result<()> {
    if l < 1 {
        return Err(invalid("at least one interferer is required"));
    }
    if !(p_i > 0.0) || !p_i.is_finite() {
        return Err(invalid(format!("interferer power must be positive, got {p_i}")));
    }
    Ok(())
}

fn check_threshold(r: f64) -> Result<()> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(invalid(format!("threshold must be non-negative, got {r}")));
    }
    Ok(())
}

/// CDF of the sum of `l` i.i.d. exponential interferers of mean `p_i`.
pub fn interference_cdf(y: f64, l: u32, p_i: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    let t = y / p_i;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..l {
        term *= t / k as f64;
        sum += term;
    }
    (1.0 - (-t).exp() * sum).clamp(0.0, 1.0)
}

/// Normalized average SINR `W̄ / (L P_I + N₀)`.
pub fn normalized_sinr(sc: &ScenarioA) -> f64 {
    sc.channel.gamma_bar / (sc.l_interferers as f64 * sc.p_i + sc.n0)
}

/// Probability-valued result checked against `[0, 1]`.
fn as_probability(v: f64, what: &str) -> Result<f64> {
    const SLACK: f64 = 1e-9;
    if (-SLACK..=1.0 + SLACK).contains(&v) {
        Ok(v.clamp(0.0, 1.0))
    } else {
        Err(Error::NumericalConsistency(format!(
            "{what} evaluated to {v:e}, outside [0, 1]"
        )))
    }
}

/// Outage probability `P(W/(Y+N₀) < R_th)` for scenario A.
///
/// For each Nakagami component of the signal mixture, the outage is
/// `F(R_th N₀)` plus a finite double sum of incomplete generalized MGFs at
/// `s = −1/(R_th P_I)` and `Λ = R_th N₀`; the components are averaged over
/// θ with the mixture weights.
pub fn outage_a(sc: &ScenarioA, spec: &QuadSpec) -> Result<f64> {
    sc.validate()?;
    if sc.r_th == 0.0 {
        return Ok(0.0);
    }
    let (r, p_i, n0) = (sc.r_th, sc.p_i, sc.n0);
    let l = sc.l_interferers;
    let s = -1.0 / (r * p_i);
    let lam = r * n0;
    // e^{N₀/P_I} multiplies every incomplete term; it is folded into the
    // exponent where it cancels against e^{−(β−s)Λ}.
    let shift = n0 / p_i;
    // Coefficients (−N₀)^{k−l} / (l! (k−l)! P_I^k R^l), stored with sign.
    let mut coef: Vec<(u32, f64, f64)> = Vec::new();
    for k in 0..l {
        for j in 0..=k {
            let d = k - j;
            if d > 0 && n0 == 0.0 {
                continue;
            }
            let sign = if d % 2 == 1 { -1.0 } else { 1.0 };
            let ln_n0 = if d > 0 { d as f64 * n0.ln() } else { 0.0 };
            let ln_c = ln_n0 - ln_gamma(j as f64 + 1.0)? - ln_gamma(d as f64 + 1.0)?
                - k as f64 * p_i.ln()
                - j as f64 * r.ln();
            coef.push((j, sign, ln_c));
        }
    }
    // Probabilities carry absolute rounding noise; a relative target on a
    // vanishing outage would never be met.
    let spec = QuadSpec {
        abs_tol: spec.abs_tol.max(1e-15),
        ..*spec
    };
    let v = lift_nakagami(&sc.channel, &spec, |np| {
        let mut acc = nakagami_cdf(lam, np);
        for &(j, sign, ln_c) in &coef {
            acc += sign * (ln_c + nakagami_igmgf_ln(j, s, lam, np, shift)).exp();
        }
        Ok(acc)
    })?;
    as_probability(v, "scenario A outage")
}

/// All `n`-tuples of non-negative integers summing to `k`, in ascending
/// lexicographic order.
pub fn compositions(k: u32, n: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n as usize);
    fill(k, n, &mut current, &mut out);
    out
}

fn fill(remaining: u32, slots: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if slots == 1 {
        current.push(remaining);
        out.push(current.clone());
        current.pop();
        return;
    }
    for first in 0..=remaining {
        current.push(first);
        fill(remaining - first, slots - 1, current, out);
        current.pop();
    }
}

/// Outage probability `P(W/Y < R̂_th)` for scenario B with `W` the MRC sum.
///
/// `Σ_{k<L} (1/(R̂_th P_I))^k Σ_{u₁+…+u_N=k} Π_i M^{(u_i)}(s)/u_i!` with
/// `s = −1/(R̂_th P_I)` and `M^{(n)}` the per-branch generalized MGF.
pub fn outage_b(sc: &ScenarioB) -> Result<f64> {
    sc.validate()?;
    if sc.r_th_hat == 0.0 {
        return Ok(0.0);
    }
    let l = sc.l_interferers;
    let x = 1.0 / (sc.r_th_hat * sc.p_i);
    let s = -x;
    let g = (0..l)
        .map(|u| Ok(ftr_gmgf(u, s, &sc.channel)? / factorial(u)))
        .collect::<Result<Vec<f64>>>()?;
    let mut total = 0.0;
    for k in 0..l {
        let inner: f64 = compositions(k, sc.n_antennas)
            .iter()
            .map(|tuple| tuple.iter().map(|&u| g[u as usize]).product::<f64>())
            .sum();
        total += x.powi(k as i32) * inner;
    }
    as_probability(total, "scenario B outage")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ftr::{ftr_cdf, ftr_mgf, CdfPath};
    use proptest::prelude::*;

    fn spec() -> QuadSpec {
        QuadSpec::default()
    }

    fn chan(g: f64, m: f64, k: f64, d: f64) -> FtrParams {
        FtrParams::new(g, m, k, d).unwrap()
    }

    #[test]
    fn interference_cdf_values() {
        assert_eq!(interference_cdf(0.0, 3, 1.0), 0.0);
        assert!((interference_cdf(1.3, 1, 2.0) - (1.0 - (-0.65f64).exp())).abs() < 1e-15);
        assert!((interference_cdf(2.0, 3, 1.0) - (1.0 - 5.0 * (-2.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn normalized_sinr_values() {
        let sc = ScenarioA::new(chan(1.0, 2.0, 1.0, 0.5), 2, 0.01, 0.98, 1.0).unwrap();
        assert!((normalized_sinr(&sc) - 1.0).abs() < 1e-15);
        let sc = ScenarioA::new(chan(10.0, 2.0, 1.0, 0.5), 1, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(normalized_sinr(&sc), 10.0);
        let scaled = ScenarioA {
            channel: sc.channel.with_gamma_bar(30.0),
            ..sc
        };
        assert!((normalized_sinr(&scaled) - 30.0).abs() < 1e-12);
    }

    #[test]
    fn compositions_enumerate() {
        assert_eq!(compositions(0, 3), vec![vec![0, 0, 0]]);
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(compositions(5, 4).len(), 56);
        assert_eq!(compositions(3, 1), vec![vec![3]]);
    }

    #[test]
    fn scenario_validation() {
        assert!(ScenarioA::new(chan(1.0, 1.5, 1.0, 0.5), 1, 1.0, 1.0, 1.0).is_err());
        assert!(ScenarioA::new(chan(1.0, 2.0, 1.0, 0.5), 0, 1.0, 1.0, 1.0).is_err());
        assert!(ScenarioB::new(chan(1.0, 1.5, 1.0, 0.5), 0, 1, 1.0, 1.0).is_err());
        assert!(ScenarioB::new(chan(1.0, 1.5, 1.0, 0.5), 2, 1, 1.0, 1.0).is_ok());
    }

    #[test]
    fn outage_a_limits() {
        let ch = chan(1.0, 2.0, 10.0, 0.6);
        let sc = ScenarioA::new(ch, 2, 1e-9, 0.5, 1.2).unwrap();
        let free = ftr_cdf(0.6, &ch, &spec(), CdfPath::Quadrature).unwrap();
        assert!((outage_a(&sc, &spec()).unwrap() - free).abs() < 1e-6);
        let sc = ScenarioA::new(ch, 2, 0.01, 1.0, 1e-12).unwrap();
        assert!(outage_a(&sc, &spec()).unwrap() < 1e-9);
    }

    #[test]
    fn outage_a_interference_only_matches_mgf() {
        // N₀ = 0, L = 1: P_out = P(Y > W/R) = E[e^{−W/(R P_I)}] = M(−1/(R P_I)).
        let ch = chan(2.0, 3.0, 5.0, 0.4);
        let sc = ScenarioA::new(ch, 1, 0.5, 0.0, 1.5).unwrap();
        let expect = ftr_mgf(-1.0 / 0.75, &ch).unwrap();
        assert!((outage_a(&sc, &spec()).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn outage_b_single_branch_is_mgf() {
        let ch = chan(3.0, 1.7, 8.0, 0.3);
        let sc = ScenarioB::new(ch, 1, 1, 1.0, 2.0).unwrap();
        let expect = ftr_mgf(-0.5, &ch).unwrap();
        assert!((outage_b(&sc).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn outage_b_matches_independent_product_form() {
        // With L = 1 the MRC outage is the product of per-branch MGFs.
        let ch = chan(3.0, 0.5, 10.0, 0.6);
        let sc = ScenarioB::new(ch, 3, 1, 1.0, 0.8).unwrap();
        let expect = ftr_mgf(-1.25, &ch).unwrap().powi(3);
        assert!((outage_b(&sc).unwrap() - expect).abs() < 1e-13);
    }

    #[test]
    fn outage_a_trends() {
        let base = |m: f64, k: f64, d: f64| {
            let sc = ScenarioA::new(chan(10.0 * 1.02, m, k, d), 2, 0.01, 1.0, 1.0).unwrap();
            outage_a(&sc, &spec()).unwrap()
        };
        let ref_ = base(2.0, 10.0, 0.6);
        assert!(base(3.0, 10.0, 0.6) < ref_);
        assert!(base(2.0, 15.0, 0.6) < ref_);
        assert!(base(2.0, 10.0, 0.2) < ref_);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn outage_a_monotone_in_threshold(m in 1u32..4, k in 0.0f64..15.0, d in 0.0f64..=1.0, snr in 0.5f64..50.0) {
            let ch = chan(snr * 1.02, m as f64, k, d);
            let mut prev = 0.0;
            for r in [0.5, 1.0, 2.0, 4.0, 8.0] {
                let v = outage_a(&ScenarioA::new(ch, 2, 0.01, 1.0, r).unwrap(), &spec()).unwrap();
                prop_assert!(v >= prev - 1e-9);
                prev = v;
            }
        }

        #[test]
        fn outage_b_monotone_and_falls_with_antennas(
            m in 0.5f64..4.0, k in 0.0f64..15.0, d in 0.0f64..=1.0, l in 1u32..4
        ) {
            let ch = chan(1.0, m, k, d);
            let mut prev = 0.0;
            for r in [0.1, 0.5, 1.0, 3.0, 10.0] {
                let one = outage_b(&ScenarioB::new(ch, 1, l, 1.0, r).unwrap()).unwrap();
                let two = outage_b(&ScenarioB::new(ch, 2, l, 1.0, r).unwrap()).unwrap();
                prop_assert!(one >= prev - 1e-12);
                prop_assert!(two <= one + 1e-12);
                prev = one;
            }
        }
    }
}
