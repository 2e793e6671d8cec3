//! Lifting of base-distribution metrics to the FTR channel.

use crate::error::{domain, Result};
use crate::models::{nakagami_mixture, FtrParams, NakagamiParams, RsParams};
use crate::quad::{try_integrate_theta, QuadSpec};

/// Base distribution a lifted metric is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    RicianShadowed,
    Nakagami,
}

type RsMetric<'a> = Box<dyn Fn(&RsParams) -> Result<f64> + Send + Sync + 'a>;
type NakagamiMetric<'a> = Box<dyn Fn(&NakagamiParams) -> Result<f64> + Send + Sync + 'a>;

/// A performance metric known for a base distribution, to be averaged over
/// the FTR phase-difference mixture.
pub enum LiftedMetric<'a> {
    RicianShadowed(RsMetric<'a>),
    Nakagami(NakagamiMetric<'a>),
}

impl<'a> LiftedMetric<'a> {
    pub fn rician_shadowed<F>(f: F) -> Self
    where
        F: Fn(&RsParams) -> Result<f64> + Send + Sync + 'a,
    {
        LiftedMetric::RicianShadowed(Box::new(f))
    }

    pub fn nakagami<F>(f: F) -> Self
    where
        F: Fn(&NakagamiParams) -> Result<f64> + Send + Sync + 'a,
    {
        LiftedMetric::Nakagami(Box::new(f))
    }

    pub fn kind(&self) -> BaseKind {
        match self {
            LiftedMetric::RicianShadowed(_) => BaseKind::RicianShadowed,
            LiftedMetric::Nakagami(_) => BaseKind::Nakagami,
        }
    }
}

impl std::fmt::Debug for LiftedMetric<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LiftedMetric({:?})", self.kind())
    }
}

/// `(1/π) ∫₀^π X^RS(γ̄_θ, m, K(1+Δ cos θ)) dθ` for a Rician Shadowed metric.
pub fn lift_rs_metric(metric: &LiftedMetric<'_>, p: &FtrParams, spec: &QuadSpec) -> Result<f64> {
    match metric {
        LiftedMetric::RicianShadowed(f) => lift_rs(p, spec, |rs| f(rs)),
        LiftedMetric::Nakagami(_) => Err(domain("lift_rs_metric needs a Rician Shadowed metric")),
    }
}

/// `(1/π) ∫₀^π Σ_i C_i(θ) X^K((m−i)Ω(θ), m−i) dθ` for a Nakagami metric.
pub fn lift_nakagami_metric(
    metric: &LiftedMetric<'_>,
    p: &FtrParams,
    spec: &QuadSpec,
) -> Result<f64> {
    match metric {
        LiftedMetric::Nakagami(f) => lift_nakagami(p, spec, |np| f(np)),
        LiftedMetric::RicianShadowed(_) => {
            Err(domain("lift_nakagami_metric needs a Nakagami metric"))
        }
    }
}

fn theta_free(p: &FtrParams) -> bool {
    p.k == 0.0 || p.delta == 0.0
}

pub(crate) fn lift_rs<F>(p: &FtrParams, spec: &QuadSpec, mut f: F) -> Result<f64>
where
    F: FnMut(&RsParams) -> Result<f64>,
{
    if theta_free(p) {
        return f(&p.rs_at(0.0));
    }
    try_integrate_theta(|t| f(&p.rs_at(t)), spec)
}

pub(crate) fn lift_nakagami<F>(p: &FtrParams, spec: &QuadSpec, mut f: F) -> Result<f64>
where
    F: FnMut(&NakagamiParams) -> Result<f64>,
{
    p.integer_m()?;
    let mut at = |theta: f64| -> Result<f64> {
        let mut acc = 0.0;
        for term in nakagami_mixture(p, theta)? {
            if term.weight != 0.0 {
                acc += term.weight * f(&term.params)?;
            }
        }
        Ok(acc)
    };
    if theta_free(p) {
        return at(0.0);
    }
    try_integrate_theta(at, spec)
}
