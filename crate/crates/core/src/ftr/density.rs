//! Density and distribution function.

use crate::error::Result;
use crate::models::{nakagami_pdf, rs_pdf, FtrParams};
use crate::quad::{try_integrate_adaptive, try_integrate_semi_infinite, QuadRule, QuadSpec};
use crate::specfun::phi2_neg;

use super::lift::{lift_nakagami, lift_rs};

/// Evaluation route for the distribution function and incomplete MGFs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CdfPath {
    /// Numerical integration of the density.
    #[default]
    Quadrature,
    /// θ-integral of the bivariate confluent hypergeometric closed form.
    Phi2,
}

/// Density of the FTR SNR as a θ-mixture of squared Rician Shadowed laws.
pub fn ftr_pdf(x: f64, p: &FtrParams, spec: &QuadSpec) -> Result<f64> {
    lift_rs(p, spec, |rs| Ok(rs_pdf(x, rs)))
}

/// Density of the FTR SNR for integer `m` as a θ-mixture of Nakagami laws.
pub fn ftr_pdf_integer(x: f64, p: &FtrParams, spec: &QuadSpec) -> Result<f64> {
    lift_nakagami(p, spec, |np| Ok(nakagami_pdf(x, np)))
}

/// Slowest exponential decay rate of the density over all θ.
pub(crate) fn tail_rate(p: &FtrParams) -> f64 {
    p.m / (p.diffuse_power() * (p.m + p.k * (1.0 + p.delta)))
}

pub(crate) fn adaptive_like(spec: &QuadSpec) -> QuadSpec {
    QuadSpec {
        rule: QuadRule::AdaptiveSubdivision,
        ..*spec
    }
}

/// `∫₀^z e^{sx} f(x) dx` split at `γ̄`: direct below, `total − tail` above.
pub(crate) fn lower_integral(
    s: f64,
    z: f64,
    total: impl FnOnce() -> Result<f64>,
    p: &FtrParams,
    spec: &QuadSpec,
) -> Result<f64> {
    if z <= 0.0 {
        return Ok(0.0);
    }
    let outer = adaptive_like(spec);
    let integrand = |x: f64| Ok((s * x).exp() * ftr_pdf(x, p, spec)?);
    if z <= p.gamma_bar {
        try_integrate_adaptive(integrand, 0.0, z, &outer)
    } else {
        let rate = 0.5 * (tail_rate(p) - s);
        let tail = try_integrate_semi_infinite(integrand, z, rate, &outer)?;
        Ok(total()? - tail)
    }
}

/// Lower incomplete MGF through the `Φ₂` closed form of each conditional law.
pub(crate) fn phi2_lower_imgf(s: f64, z: f64, p: &FtrParams, spec: &QuadSpec) -> Result<f64> {
    if z <= 0.0 {
        return Ok(0.0);
    }
    let inv_a = 1.0 / p.diffuse_power();
    let m = p.m;
    lift_rs(p, spec, |rs| {
        let k = rs.k_r;
        let x = (s - inv_a) * z;
        let y = (s - m * inv_a / (m + k)) * z;
        let front = z * inv_a * (m * (m / (m + k)).ln()).exp();
        Ok(front * phi2_neg(1.0 - m, m, 2.0, x, y)?)
    })
}

/// Distribution function of the FTR SNR.
///
/// The quadrature path integrates the density over `[0, x]` when `x ≤ γ̄`
/// and otherwise subtracts the upper tail from one.
pub fn ftr_cdf(x: f64, p: &FtrParams, spec: &QuadSpec, path: CdfPath) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    let v = match path {
        CdfPath::Quadrature => lower_integral(0.0, x, || Ok(1.0), p, spec)?,
        CdfPath::Phi2 => phi2_lower_imgf(0.0, x, p, spec)?,
    };
    Ok(v.clamp(0.0, 1.0))
}
