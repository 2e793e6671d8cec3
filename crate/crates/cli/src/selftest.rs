//! Built-in validation suite: closed-form identities, dual-path agreement
//! and Monte Carlo cross-checks.

use std::fmt::Write as _;

use ftr_core::ftr::{
    ftr_cdf, ftr_gmgf, ftr_igmgf, ftr_imgf_lower, ftr_imgf_upper, ftr_mgf, ftr_moment, ftr_pdf,
    ftr_pdf_integer, lift_rs_metric, CdfPath, LiftedMetric,
};
use ftr_core::mc::{empirical_cdf, mc_mean, mc_outage_a, mc_outage_b, sample_snr};
use ftr_core::models::rs_mgf;
use ftr_core::outage::{outage_a, outage_b};
use ftr_core::{FtrParams, McConfig, QuadSpec, ScenarioA, ScenarioB};

use crate::error::CliResult;
use crate::sweep::within_3_sigma;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

impl Level {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fast" => Some(Level::Fast),
            "full" => Some(Level::Full),
            _ => None,
        }
    }

    fn samples(self) -> u64 {
        match self {
            Level::Fast => 100_000,
            Level::Full => 10_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    /// Observed discrepancy (relative error, absolute error or σ multiple).
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    fn push(&mut self, name: impl Into<String>, value: f64, limit: f64) {
        self.checks.push(Check {
            name: name.into(),
            value,
            limit,
            passed: value <= limit,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            writeln!(
                out,
                "{:<width$}  {:>10.3e}  <= {:>8.1e}  {}",
                c.name,
                c.value,
                c.limit,
                if c.passed { "PASS" } else { "FAIL" }
            )
            .expect("writing to a String");
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        writeln!(out, "{} checks, {} failed", self.checks.len(), failed).expect("writing to a String");
        out
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Deviation in units of `sigma`; a zero `sigma` demands agreement to rounding.
fn sigmas(analytic: f64, estimate: f64, sigma: f64) -> f64 {
    let d = (analytic - estimate).abs();
    if sigma > 0.0 {
        d / sigma
    } else if within_3_sigma(analytic, estimate, 0.0) {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Frozen high-precision value of `M(−1)` for `γ̄=2, m=2.5, K=8, Δ=0.7`.
const MGF_FIXTURE: f64 = 0.301_937_769_982_451_497_1;

/// Runs the suite. `inject_fault` flips the sign of a frozen fixture so the
/// run must fail.
pub fn selftest(level: Level, seed: u64, inject_fault: bool) -> CliResult<Report> {
    let spec = QuadSpec::default();
    let mut report = Report::default();

    let fixture = if inject_fault { -MGF_FIXTURE } else { MGF_FIXTURE };
    let p = FtrParams::new(2.0, 2.5, 8.0, 0.7)?;
    report.push("mgf vs frozen fixture (rel)", rel(ftr_mgf(-1.0, &p)?, fixture), 1e-13);

    let mut worst = 0.0f64;
    for m in [0.7, 1.0, 2.5] {
        for k in [0.0, 3.0, 15.0] {
            for d in [0.0, 0.5, 1.0] {
                let p = FtrParams::new(1.0, m, k, d)?;
                for s in [-0.1, -1.0, -10.0] {
                    let metric = LiftedMetric::rician_shadowed(move |rs| rs_mgf(s, rs));
                    let lifted = lift_rs_metric(&metric, &p, &spec)?;
                    worst = worst.max(rel(ftr_mgf(s, &p)?, lifted));
                }
            }
        }
    }
    report.push("mgf closed form vs theta integral (max rel)", worst, 1e-10);

    let xs = match level {
        Level::Fast => 50,
        Level::Full => 200,
    };
    let mut worst = 0.0f64;
    for m in [1.0, 2.0, 3.0, 5.0] {
        let p = FtrParams::new(1.0, m, 10.0, 0.5)?;
        for i in 1..=xs {
            let x = 4.0 * i as f64 / xs as f64;
            worst = worst.max(rel(ftr_pdf_integer(x, &p, &spec)?, ftr_pdf(x, &p, &spec)?));
        }
    }
    report.push("pdf RS vs Nakagami mixture (max rel)", worst, 1e-9);

    let p = FtrParams::new(1.0, 2.0, 5.0, 0.9)?;
    let (mut cdf_gap, mut split, mut ig0) = (0.0f64, 0.0f64, 0.0f64);
    for x in [0.05, 0.3, 1.0, 2.5] {
        let q = ftr_cdf(x, &p, &spec, CdfPath::Quadrature)?;
        let f = ftr_cdf(x, &p, &spec, CdfPath::Phi2)?;
        cdf_gap = cdf_gap.max((q - f).abs());
        let s = -0.7;
        let total = ftr_imgf_lower(s, x, &p, &spec, CdfPath::Quadrature)? + ftr_imgf_upper(s, x, &p, &spec)?;
        split = split.max(rel(total, ftr_mgf(s, &p)?));
    }
    for s in [-0.1, -1.0, -5.0] {
        ig0 = ig0.max(rel(ftr_igmgf(0, s, 0.0, &p, &spec)?, ftr_mgf(s, &p)?));
    }
    report.push("cdf quadrature vs phi2 (max abs)", cdf_gap, 1e-9);
    report.push("lower + upper imgf vs mgf (max rel)", split, 1e-12);
    report.push("igmgf(0, s, 0) vs mgf (max rel)", ig0, 1e-9);
    report.push(
        "gmgf(0, s) vs mgf (rel)",
        rel(ftr_gmgf(0, -1.3, &p)?, ftr_mgf(-1.3, &p)?),
        1e-12,
    );
    report.push("first moment vs mean (rel)", rel(ftr_moment(1, &p)?, p.gamma_bar), 1e-9);

    let n = level.samples();
    let cfg = McConfig::new(n, seed);
    let mean = mc_mean(&p, &cfg, |g| g)?;
    report.push("mc mean (sigmas)", sigmas(p.gamma_bar, mean.mean, mean.stderr), 3.0);
    let e = mc_mean(&p, &McConfig::new(n, seed.wrapping_add(1)), |g| (-1.0 * g).exp())?;
    report.push("mc mgf at s=-1 (sigmas)", sigmas(ftr_mgf(-1.0, &p)?, e.mean, e.stderr), 3.0);

    let p15 = FtrParams::new(1.0, 1.5, 10.0, 0.5)?;
    let samples = sample_snr(&p15, &McConfig::new(n, seed.wrapping_add(2)))?;
    let grid: Vec<f64> = (1..=40).map(|i| 0.1 * i as f64).collect();
    let emp = empirical_cdf(&samples, &grid)?;
    let mut sup = 0.0f64;
    for (&x, &e) in grid.iter().zip(&emp) {
        sup = sup.max((ftr_cdf(x, &p15, &spec, CdfPath::Quadrature)? - e).abs());
    }
    // Twice the 95% DKW half-width.
    let dkw = 2.0 * ((2.0f64 / 0.05).ln() / (2.0 * n as f64)).sqrt();
    report.push("empirical cdf sup distance", sup, dkw);

    let a = ScenarioA::new(FtrParams::new(20.0, 2.0, 10.0, 0.6)?, 2, 0.01, 1.0, 1.0)?;
    let exact = outage_a(&a, &spec)?;
    let est = mc_outage_a(&a, &McConfig::new(n, seed.wrapping_add(3)))?;
    let sigma = (exact * (1.0 - exact) / n as f64).sqrt();
    report.push("outage A vs mc (sigmas)", sigmas(exact, est.mean, sigma), 3.0);

    let b = ScenarioB::new(FtrParams::new(10.0, 1.0, 10.0, 0.6)?, 2, 1, 1.0, 1.0)?;
    let exact = outage_b(&b)?;
    let est = mc_outage_b(&b, &McConfig::new(n, seed.wrapping_add(4)))?;
    let sigma = (exact * (1.0 - exact) / n as f64).sqrt();
    report.push("outage B vs mc (sigmas)", sigmas(exact, est.mean, sigma), 3.0);

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suite_passes_and_fault_is_caught() {
        let r = selftest(Level::Fast, 7, false).unwrap();
        assert!(r.passed(), "{}", r.render());
        let r = selftest(Level::Fast, 7, true).unwrap();
        assert!(!r.passed());
        assert!(r.render().contains("FAIL"));
    }
}
