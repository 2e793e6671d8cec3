//! Channel parameter sets and the two base distributions.

use crate::error::{domain, invalid, Result};
use crate::specfun::{binomial, hyp1f1_scaled, ln_gamma};

/// Fluctuating Two-Ray channel: mean SNR `γ̄`, fluctuation severity `m`,
/// specular-to-diffuse power ratio `K` and specular similarity `Δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FtrParams {
    pub gamma_bar: f64,
    pub m: f64,
    pub k: f64,
    pub delta: f64,
}

impl FtrParams {
    pub fn new(gamma_bar: f64, m: f64, k: f64, delta: f64) -> Result<Self> {
        let p = FtrParams {
            gamma_bar,
            m,
            k,
            delta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_bar > 0.0) || !self.gamma_bar.is_finite() {
            return Err(invalid(format!("gamma_bar must be positive, got {}", self.gamma_bar)));
        }
        if !(self.m > 0.0) || !self.m.is_finite() {
            return Err(invalid(format!("m must be positive, got {}", self.m)));
        }
        if !(self.k >= 0.0) || !self.k.is_finite() {
            return Err(invalid(format!("K must be non-negative, got {}", self.k)));
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(invalid(format!("delta must lie in [0, 1], got {}", self.delta)));
        }
        Ok(())
    }

    /// Same channel with a different mean power.
    pub fn with_gamma_bar(self, gamma_bar: f64) -> Self {
        FtrParams { gamma_bar, ..self }
    }

    /// Per-dimension diffuse variance `σ² = γ̄ / (2(1+K))`.
    pub fn sigma2(&self) -> f64 {
        self.gamma_bar / (2.0 * (1.0 + self.k))
    }

    /// Diffuse power `2σ² = γ̄/(1+K)`, unchanged by the θ-mixture.
    pub fn diffuse_power(&self) -> f64 {
        self.gamma_bar / (1.0 + self.k)
    }

    /// `m` as an integer, or a domain error if it is not one.
    pub fn integer_m(&self) -> Result<u32> {
        integer_shape(self.m)
    }

    /// Rician Shadowed component at phase difference `θ`: `K_θ = K(1+Δ cos θ)`
    /// with the diffuse power `γ̄/(1+K)` held fixed.
    pub fn rs_at(&self, theta: f64) -> RsParams {
        let k_theta = (self.k * (1.0 + self.delta * theta.cos())).max(0.0);
        RsParams {
            gamma_bar: self.diffuse_power() * (1.0 + k_theta),
            m: self.m,
            k_r: k_theta,
        }
    }
}

pub(crate) fn integer_shape(m: f64) -> Result<u32> {
    if m >= 1.0 && m == m.round() && m <= u32::MAX as f64 {
        Ok(m as u32)
    } else {
        Err(domain(format!("this formulation requires integer m >= 1, got {m}")))
    }
}

/// Squared Rician Shadowed distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RsParams {
    pub gamma_bar: f64,
    pub m: f64,
    pub k_r: f64,
}

impl RsParams {
    pub fn new(gamma_bar: f64, m: f64, k_r: f64) -> Result<Self> {
        if !(gamma_bar > 0.0) || !gamma_bar.is_finite() {
            return Err(invalid(format!("gamma_bar must be positive, got {gamma_bar}")));
        }
        if !(m > 0.0) || !m.is_finite() {
            return Err(invalid(format!("m must be positive, got {m}")));
        }
        if !(k_r >= 0.0) || !k_r.is_finite() {
            return Err(invalid(format!("K_r must be non-negative, got {k_r}")));
        }
        Ok(RsParams { gamma_bar, m, k_r })
    }

    /// Diffuse power `γ̄/(1+K_r)`.
    pub fn diffuse_power(&self) -> f64 {
        self.gamma_bar / (1.0 + self.k_r)
    }
}

/// Squared Nakagami-m distribution with integer shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NakagamiParams {
    pub gamma_hat: f64,
    pub m_hat: u32,
}

impl NakagamiParams {
    pub fn new(gamma_hat: f64, m_hat: u32) -> Result<Self> {
        if !(gamma_hat > 0.0) || !gamma_hat.is_finite() {
            return Err(invalid(format!("gamma_hat must be positive, got {gamma_hat}")));
        }
        if m_hat < 1 {
            return Err(invalid("m_hat must be at least 1"));
        }
        Ok(NakagamiParams { gamma_hat, m_hat })
    }

    /// Scale of the equivalent Gamma law, `γ̂/m̂`.
    pub fn scale(&self) -> f64 {
        self.gamma_hat / self.m_hat as f64
    }
}

/// One weighted Nakagami component of an integer-`m` mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureTerm {
    pub weight: f64,
    pub params: NakagamiParams,
}

/// Density of the squared Rician Shadowed distribution.
pub fn rs_pdf(x: f64, p: &RsParams) -> f64 {
    if x < 0.0 || x == f64::INFINITY {
        return 0.0;
    }
    let (g, m, k) = (p.gamma_bar, p.m, p.k_r);
    let rate = (1.0 + k) / g;
    if k == 0.0 {
        return (-x / g).exp() / g;
    }
    let decay = rate * x;
    let z = k / (m + k) * decay;
    // 1F1(m; 1; z) grows like e^z z^{m-1}; skip the series when the product
    // underflows anyway.
    if decay - z - (m - 1.0).max(0.0) * (z + 1.0).ln() > 760.0 {
        return 0.0;
    }
    let log_front = m * (m / (m + k)).ln() + rate.ln();
    let f = hyp1f1_scaled(m, 1.0, z, decay).expect("b = 1 is valid and decay dominates z");
    (log_front.exp() * f).max(0.0)
}

/// Moment generating function of the squared Rician Shadowed distribution.
pub fn rs_mgf(s: f64, p: &RsParams) -> Result<f64> {
    if !(s <= 0.0) {
        return Err(domain(format!("MGF is evaluated for s <= 0, got {s}")));
    }
    let (g, m, k) = (p.gamma_bar, p.m, p.k_r);
    let a = g / (1.0 + k);
    // m^m (1 − a s)^{m−1} / (m − (m+K) a s)^m
    let num = (m - 1.0) * (-a * s).ln_1p();
    let den = m * (-(m + k) * a * s / m).ln_1p();
    Ok((num - den).exp())
}

/// Density of the squared Nakagami-m distribution.
pub fn nakagami_pdf(x: f64, p: &NakagamiParams) -> f64 {
    if x < 0.0 || x == f64::INFINITY {
        return 0.0;
    }
    let m = p.m_hat as f64;
    let beta = m / p.gamma_hat;
    if x == 0.0 {
        return if p.m_hat == 1 { beta } else { 0.0 };
    }
    let ln_f = m * beta.ln() + (m - 1.0) * x.ln() - ln_gamma(m).expect("m >= 1") - beta * x;
    ln_f.exp()
}

/// Complementary CDF of the squared Nakagami-m distribution.
pub fn nakagami_ccdf(x: f64, p: &NakagamiParams) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let y = x * p.m_hat as f64 / p.gamma_hat;
    // e^{−y} Σ_{j<m̂} y^j / j!
    let mut term = (-y).exp();
    let mut sum = term;
    for j in 1..p.m_hat {
        term *= y / j as f64;
        sum += term;
    }
    sum.min(1.0)
}

/// CDF of the squared Nakagami-m distribution, accurate in the lower tail.
pub fn nakagami_cdf(x: f64, p: &NakagamiParams) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let m = p.m_hat;
    let y = x * m as f64 / p.gamma_hat;
    if y > m as f64 + 1.0 {
        return 1.0 - nakagami_ccdf(x, p);
    }
    // e^{−y} Σ_{j≥m̂} y^j / j!
    let mut term = (m as f64 * y.ln() - y - ln_gamma(m as f64 + 1.0).expect("positive")).exp();
    let mut sum = term;
    let mut j = m as f64;
    while term > 1e-17 * sum {
        j += 1.0;
        term *= y / j;
        sum += term;
    }
    sum.min(1.0)
}

/// Weights and components for an integer-`m` Rician Shadowed law written as
/// a Nakagami mixture: diffuse power `a`, specular ratio `k`.
fn mixture_terms(m: u32, a: f64, k: f64) -> Vec<MixtureTerm> {
    let mf = m as f64;
    let p = mf / (mf + k);
    let q = k / (mf + k);
    let omega = a * (mf + k) / mf;
    (0..m)
        .map(|i| {
            let shape = m - i;
            MixtureTerm {
                weight: binomial(m - 1, i) * p.powi(i as i32) * q.powi((m - 1 - i) as i32),
                params: NakagamiParams {
                    gamma_hat: shape as f64 * omega,
                    m_hat: shape,
                },
            }
        })
        .collect()
}

/// Nakagami mixture of the FTR conditional law at phase difference `θ`.
///
/// Term `i` carries weight `C(m−1, i) p^i (1−p)^{m−1−i}` with
/// `p = m/(m+K_θ)` and shape `m−i` with mean `(m−i)Ω(θ)`,
/// `Ω(θ) = γ̄/(1+K) · (m+K_θ)/m`.
pub fn nakagami_mixture(p: &FtrParams, theta: f64) -> Result<Vec<MixtureTerm>> {
    let m = p.integer_m()?;
    let rs = p.rs_at(theta);
    Ok(mixture_terms(m, p.diffuse_power(), rs.k_r))
}

/// Nakagami mixture of a squared Rician Shadowed law with integer `m`.
pub fn rs_nakagami_mixture(p: &RsParams) -> Result<Vec<MixtureTerm>> {
    let m = integer_shape(p.m)?;
    Ok(mixture_terms(m, p.diffuse_power(), p.k_r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_adaptive, integrate_semi_infinite, QuadSpec};
    use proptest::prelude::*;

    fn spec() -> QuadSpec {
        QuadSpec::adaptive().with_rel_tol(1e-12)
    }

    #[test]
    fn params_validation() {
        assert!(FtrParams::new(1.0, 2.0, 3.0, 0.5).is_ok());
        assert!(FtrParams::new(0.0, 2.0, 3.0, 0.5).is_err());
        assert!(FtrParams::new(1.0, 0.0, 3.0, 0.5).is_err());
        assert!(FtrParams::new(1.0, 2.0, -1.0, 0.5).is_err());
        assert!(FtrParams::new(1.0, 2.0, 3.0, 1.5).is_err());
        assert!(FtrParams::new(1.0, 2.0, 0.0, 1.0).is_ok());
        assert!(NakagamiParams::new(1.0, 0).is_err());
        let p = FtrParams::new(3.0, 2.0, 5.0, 0.5).unwrap();
        assert!((2.0 * p.sigma2() * (1.0 + p.k) - p.gamma_bar).abs() < 1e-15);
    }

    #[test]
    fn rs_pdf_special_cases() {
        let p = RsParams::new(2.0, 1.7, 0.0).unwrap();
        for x in [0.0, 0.3, 4.0] {
            assert!((rs_pdf(x, &p) - (-x / 2.0f64).exp() / 2.0).abs() < 1e-15);
        }
        let p = RsParams::new(2.0, 2.7, 5.0).unwrap();
        let at0 = (2.7f64 / 7.7).powf(2.7) * 6.0 / 2.0;
        assert!((rs_pdf(0.0, &p) - at0).abs() < 1e-14 * at0);
        assert_eq!(rs_pdf(-1.0, &p), 0.0);
    }

    #[test]
    fn rs_pdf_normalized_over_grid() {
        for m in [0.5, 1.0, 2.7, 5.0] {
            for k in [0.0, 1.0, 10.0] {
                let p = RsParams::new(2.0, m, k).unwrap();
                let rate = (1.0 + k) * m / (2.0 * (m + k));
                let total = integrate_semi_infinite(|x| rs_pdf(x, &p), 0.0, rate, &spec()).unwrap();
                assert!((total - 1.0).abs() < 1e-9, "m={m} K={k}: {total}");
            }
        }
    }

    #[test]
    fn rs_pdf_far_tail_underflows_cleanly() {
        let p = RsParams::new(1.0, 2.0, 10.0).unwrap();
        assert_eq!(rs_pdf(1e9, &p), 0.0);
        assert!(rs_pdf(40.0, &p) > 0.0);
    }

    #[test]
    fn nakagami_pdf_cases() {
        let p = NakagamiParams::new(2.0, 1).unwrap();
        assert!((nakagami_pdf(1.0, &p) - (-0.5f64).exp() / 2.0).abs() < 1e-15);
        assert_eq!(nakagami_pdf(0.0, &NakagamiParams::new(1.0, 3).unwrap()), 0.0);
        let p = NakagamiParams::new(3.0, 4).unwrap();
        let mean = integrate_semi_infinite(|x| x * nakagami_pdf(x, &p), 0.0, 1.0, &spec()).unwrap();
        assert!((mean - 3.0).abs() < 1e-9);
        let tail = integrate_semi_infinite(|x| nakagami_pdf(x, &p), 1.3, 1.0, &spec()).unwrap();
        assert!((nakagami_ccdf(1.3, &p) - tail).abs() < 1e-12);
        for x in [1e-6, 0.2, 1.3, 9.0] {
            let head = integrate_adaptive(|t| nakagami_pdf(t, &p), 0.0, x, &spec()).unwrap();
            assert!((nakagami_cdf(x, &p) - head).abs() < 1e-13 * head.max(1e-3), "x={x}");
        }
    }

    #[test]
    fn rs_mgf_cases() {
        let p = RsParams::new(2.0, 1.8, 4.0).unwrap();
        assert_eq!(rs_mgf(0.0, &p).unwrap(), 1.0);
        let e = RsParams::new(2.0, 1.8, 0.0).unwrap();
        assert!((rs_mgf(-0.7, &e).unwrap() - 1.0 / 2.4).abs() < 1e-15);
        let s = -0.5;
        let oracle = integrate_semi_infinite(|x| (s * x).exp() * rs_pdf(x, &p), 0.0, 0.5, &spec())
            .unwrap();
        assert!((rs_mgf(s, &p).unwrap() - oracle).abs() < 1e-9 * oracle);
        assert!(rs_mgf(0.1, &p).is_err());
    }

    #[test]
    fn mixture_shapes() {
        let p = FtrParams::new(1.0, 1.0, 7.0, 0.4).unwrap();
        let t = nakagami_mixture(&p, 0.8).unwrap();
        assert_eq!(t.len(), 1);
        assert!((t[0].weight - 1.0).abs() < 1e-15);
        assert_eq!(t[0].params.m_hat, 1);

        let p = FtrParams::new(1.0, 3.0, 10.0, 0.6).unwrap();
        let t = nakagami_mixture(&p, 1.0).unwrap();
        let sum: f64 = t.iter().map(|c| c.weight).sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(nakagami_mixture(&FtrParams::new(1.0, 2.5, 1.0, 0.0).unwrap(), 0.0).is_err());

        let flat = FtrParams::new(1.5, 3.0, 4.0, 0.0).unwrap();
        let b = rs_nakagami_mixture(&RsParams::new(1.5, 3.0, 4.0).unwrap()).unwrap();
        for theta in [0.0, 1.1, 3.0] {
            let c = nakagami_mixture(&flat, theta).unwrap();
            for (ci, bj) in c.iter().zip(&b) {
                assert!((ci.weight - bj.weight).abs() < 1e-15);
                assert!((ci.params.gamma_hat - bj.params.gamma_hat).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn mixture_k_zero_is_exponential() {
        let p = FtrParams::new(2.0, 4.0, 0.0, 0.3).unwrap();
        let t = nakagami_mixture(&p, 0.5).unwrap();
        assert!((t[3].weight - 1.0).abs() < 1e-15);
        assert_eq!(t[3].params.m_hat, 1);
        assert!((t[3].params.gamma_hat - 2.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn mixture_weights_are_a_distribution(
            m in 1u32..8, k in 0.0f64..40.0, delta in 0.0f64..=1.0, theta in 0.0f64..std::f64::consts::PI
        ) {
            let p = FtrParams::new(1.0, m as f64, k, delta).unwrap();
            let t = nakagami_mixture(&p, theta).unwrap();
            prop_assert!(t.iter().all(|c| c.weight >= 0.0));
            let sum: f64 = t.iter().map(|c| c.weight).sum();
            prop_assert!((sum - 1.0).abs() < 1e-12);
        }

        #[test]
        fn rs_pdf_equals_its_nakagami_mixture(
            m in 1u32..7, k in 0.0f64..25.0, g in 0.2f64..5.0, x in 0.0f64..10.0
        ) {
            let rs = RsParams::new(g, m as f64, k).unwrap();
            let direct = rs_pdf(x, &rs);
            let mix: f64 = rs_nakagami_mixture(&rs)
                .unwrap()
                .iter()
                .map(|c| c.weight * nakagami_pdf(x, &c.params))
                .sum();
            prop_assert!((direct - mix).abs() <= 1e-10 * direct.max(1e-300) + 1e-300,
                "direct {} mix {}", direct, mix);
        }

        #[test]
        fn rs_mgf_origin_is_one(m in 0.1f64..10.0, k in 0.0f64..50.0, g in 0.1f64..10.0) {
            let p = RsParams::new(g, m, k).unwrap();
            prop_assert_eq!(rs_mgf(0.0, &p).unwrap(), 1.0);
        }
    }
}
