//! Transform-domain statistics: MGF, generalized and incomplete MGFs, moments.

use crate::error::{domain, Result};
use crate::models::{FtrParams, NakagamiParams};
use crate::quad::QuadSpec;
use crate::specfun::{binomial, factorial, hyp2f1_nonpos, legendre_p, ln_gamma, pochhammer};

use super::density::{lower_integral, phi2_lower_imgf, CdfPath};
use super::lift::lift_nakagami;

fn check_s(s: f64) -> Result<()> {
    if s <= 0.0 {
        Ok(())
    } else {
        Err(domain(format!("transform statistics are evaluated for s <= 0, got {s}")))
    }
}

/// Moment generating function `E[e^{sγ}]` in closed form:
///
/// `(1+K) m^m (1+K−γ̄s)^{m−1} R^{−m/2} P_{m−1}(((1+K)m − (m+K)γ̄s)/√R)`
/// with `R = ((1+K)m − (m+K)γ̄s)² − (KΔγ̄s)²`.
pub fn ftr_mgf(s: f64, p: &FtrParams) -> Result<f64> {
    check_s(s)?;
    if s == 0.0 {
        return Ok(1.0);
    }
    let (g, m, k) = (p.gamma_bar, p.m, p.k);
    let big_a = 1.0 + k;
    let a = big_a * m - (m + k) * g * s;
    let b = k * p.delta * g * s;
    // a > |b| for s ≤ 0; factor R to avoid cancellation.
    let r = (a - b) * (a + b);
    let arg = (a / r.sqrt()).max(1.0);
    let ln = big_a.ln() + m * m.ln() + (m - 1.0) * (big_a - g * s).ln() - 0.5 * m * r.ln();
    Ok(ln.exp() * legendre_p(m - 1.0, arg)?)
}

/// Generalized MGF `E[γ^n e^{sγ}]` in closed form.
///
/// Finite double sum over Pochhammer-weighted terms, each carrying a Gauss
/// hypergeometric factor `₂F₁(m+l, q+½; q+1; z)` with
/// `z = 2KΔγ̄s / (m(1+K) − (m+K−KΔ)γ̄s) ≤ 0`.
pub fn ftr_gmgf(n: u32, s: f64, p: &FtrParams) -> Result<f64> {
    check_s(s)?;
    let (g, m, k, d) = (p.gamma_bar, p.m, p.k, p.delta);
    let big_a = 1.0 + k;
    let d1 = m * big_a - (m + k - k * d) * g * s;
    let z = 2.0 * k * d * g * s / d1;
    let ln_front = factorial(n).ln() + m * m.ln() + (m - n as f64 - 1.0) * (big_a - g * s).ln()
        + n as f64 * g.ln();
    let l_max = if k == 0.0 { 0 } else { n };
    let mut total = 0.0;
    for l in 0..=l_max {
        let lf = l as f64;
        let ln_k = if l == 0 { 0.0 } else { lf * k.ln() };
        let ln_outer = binomial(n, l).ln() + pochhammer(m, l).ln() - factorial(l).ln()
            + (lf + 1.0) * big_a.ln()
            + ln_k
            - (m + lf) * d1.ln();
        let mut inner = 0.0;
        for q in 0..=l {
            let w_q = binomial(l, q)
                * (1.0 - d).powi((l - q) as i32)
                * (2.0 * d).powi(q as i32)
                * pochhammer(0.5, q)
                / factorial(q);
            if w_q == 0.0 {
                continue;
            }
            let qf = q as f64;
            inner += w_q * hyp2f1_nonpos(m + lf, qf + 0.5, qf + 1.0, z)?;
        }
        total += (ln_front + ln_outer).exp() * inner;
    }
    Ok(total)
}

/// Raw moment `E[γ^n]`, the `s = 0` value of [`ftr_gmgf`].
pub fn ftr_moment(n: u32, p: &FtrParams) -> Result<f64> {
    ftr_gmgf(n, 0.0, p)
}

/// Lower incomplete MGF `∫₀^z e^{sx} f(x) dx`.
pub fn ftr_imgf_lower(
    s: f64,
    z: f64,
    p: &FtrParams,
    spec: &QuadSpec,
    path: CdfPath,
) -> Result<f64> {
    check_s(s)?;
    if !(z >= 0.0) {
        return Err(domain(format!("incomplete MGF bound must be non-negative, got {z}")));
    }
    match path {
        CdfPath::Quadrature => lower_integral(s, z, || ftr_mgf(s, p), p, spec),
        CdfPath::Phi2 => phi2_lower_imgf(s, z, p, spec),
    }
}

/// Upper incomplete MGF `∫_z^∞ e^{sx} f(x) dx = M(s) − M^l(s, z)`.
pub fn ftr_imgf_upper(s: f64, z: f64, p: &FtrParams, spec: &QuadSpec) -> Result<f64> {
    Ok(ftr_mgf(s, p)? - ftr_imgf_lower(s, z, p, spec, CdfPath::Quadrature)?)
}

/// `ln` of the Nakagami incomplete generalized MGF
/// `∫_Λ^∞ x^n e^{sx} f(x) dx`, with an additive `shift` folded into the
/// exponent before summation so that large factors `e^{shift}` cancel
/// against the `e^{−(β−s)Λ}` decay without overflow.
pub(crate) fn nakagami_igmgf_ln(n: u32, s: f64, lam: f64, np: &NakagamiParams, shift: f64) -> f64 {
    let mh = np.m_hat as f64;
    let beta = mh / np.gamma_hat;
    let rate = beta - s;
    let big_n = np.m_hat + n;
    let ln_front = mh * beta.ln() - (mh + n as f64) * rate.ln()
        + ln_gamma(big_n as f64).expect("positive")
        - ln_gamma(mh).expect("positive");
    let y = rate * lam;
    if y == 0.0 {
        return ln_front + shift;
    }
    // e^{−y} Σ_{j<N} y^j / j!, in log space.
    let ln_y = y.ln();
    let terms: Vec<f64> = (0..big_n)
        .map(|j| j as f64 * ln_y - ln_gamma(j as f64 + 1.0).expect("positive") - y + shift)
        .collect();
    let peak = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|t| (t - peak).exp()).sum();
    ln_front + peak + sum.ln()
}

/// Incomplete generalized MGF of the squared Nakagami-m law.
pub fn nakagami_igmgf(n: u32, s: f64, lam: f64, np: &NakagamiParams) -> Result<f64> {
    check_s(s)?;
    if !(lam >= 0.0) {
        return Err(domain(format!("lower bound must be non-negative, got {lam}")));
    }
    Ok(nakagami_igmgf_ln(n, s, lam, np, 0.0).exp())
}

/// Incomplete generalized MGF `∫_Λ^∞ x^n e^{sx} f(x) dx` for integer `m`,
/// through the Nakagami mixture.
pub fn ftr_igmgf(n: u32, s: f64, lam: f64, p: &FtrParams, spec: &QuadSpec) -> Result<f64> {
    check_s(s)?;
    if !(lam >= 0.0) {
        return Err(domain(format!("lower bound must be non-negative, got {lam}")));
    }
    p.integer_m()?;
    lift_nakagami(p, spec, |np| Ok(nakagami_igmgf_ln(n, s, lam, np, 0.0).exp()))
}
