//! Evaluation of one statistic over a one-dimensional axis.

use rayon::prelude::*;

use ftr_core::ftr::{
    ftr_cdf, ftr_gmgf, ftr_igmgf, ftr_imgf_lower, ftr_mgf, ftr_moment, ftr_pdf, CdfPath,
};
use ftr_core::mc::{mc_outage_a, mc_outage_b, sample_snr};
use ftr_core::outage::{outage_a, outage_b};
use ftr_core::{FtrParams, McConfig, OutageScenario, QuadSpec};

use crate::error::{usage, CliResult};
use crate::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    Pdf,
    Cdf,
    Mgf,
    Gmgf,
    Moments,
    Imgf,
    Igmgf,
    OutageA,
    OutageB,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Pdf => "pdf",
            Statistic::Cdf => "cdf",
            Statistic::Mgf => "mgf",
            Statistic::Gmgf => "gmgf",
            Statistic::Moments => "moment",
            Statistic::Imgf => "imgf",
            Statistic::Igmgf => "igmgf",
            Statistic::OutageA | Statistic::OutageB => "outage",
        }
    }

    /// Axis variables this statistic can be swept over; the first is the default.
    pub fn axes(self) -> &'static [AxisVar] {
        match self {
            Statistic::Pdf | Statistic::Cdf => &[AxisVar::X],
            Statistic::Mgf | Statistic::Gmgf => &[AxisVar::S],
            Statistic::Moments => &[AxisVar::N],
            Statistic::Imgf => &[AxisVar::Z],
            Statistic::Igmgf => &[AxisVar::Lambda],
            Statistic::OutageA => &[AxisVar::Sinr, AxisVar::Threshold],
            Statistic::OutageB => &[AxisVar::Threshold, AxisVar::Sinr],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisVar {
    /// SNR value.
    X,
    /// Transform variable.
    S,
    /// Moment order.
    N,
    /// Upper limit of the lower incomplete MGF.
    Z,
    /// Lower limit of the incomplete generalized MGF.
    Lambda,
    /// Normalized average SINR (scenario A) or average SIR per branch (scenario B).
    Sinr,
    /// Outage threshold.
    Threshold,
}

impl AxisVar {
    pub fn name(self) -> &'static str {
        match self {
            AxisVar::X => "x",
            AxisVar::S => "s",
            AxisVar::N => "n",
            AxisVar::Z => "z",
            AxisVar::Lambda => "lambda",
            AxisVar::Sinr => "sinr",
            AxisVar::Threshold => "r_th",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "x" => AxisVar::X,
            "s" => AxisVar::S,
            "n" => AxisVar::N,
            "z" => AxisVar::Z,
            "lambda" | "lam" => AxisVar::Lambda,
            "sinr" | "sir" => AxisVar::Sinr,
            "r-th" | "r_th" | "threshold" => AxisVar::Threshold,
            _ => return None,
        })
    }

    fn allows_db(self) -> bool {
        matches!(self, AxisVar::Sinr | AxisVar::Threshold)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
    /// `start`/`stop` in dB, evenly spaced in dB.
    Db,
}

impl Spacing {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "linear" | "lin" => Spacing::Linear,
            "log" => Spacing::Log,
            "db" | "dB" => Spacing::Db,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub var: AxisVar,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

impl Axis {
    pub fn validate(&self) -> CliResult<()> {
        if self.points < 2 {
            return Err(usage("an axis needs at least 2 points"));
        }
        if !(self.start < self.stop) || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(usage(format!("axis requires start < stop, got {} and {}", self.start, self.stop)));
        }
        match self.spacing {
            Spacing::Db if !self.var.allows_db() => Err(usage(format!(
                "dB spacing only applies to threshold or SINR axes, not {}",
                self.var.name()
            ))),
            Spacing::Log if self.start <= 0.0 => Err(usage("log spacing needs a positive start")),
            _ => Ok(()),
        }
    }

    /// Column label for the axis values as written to the table.
    pub fn column(&self) -> String {
        match self.spacing {
            Spacing::Db => format!("{}_db", self.var.name()),
            _ => self.var.name().to_string(),
        }
    }

    /// `(displayed, linear)` pairs.
    pub fn values(&self) -> Vec<(f64, f64)> {
        let n = self.points;
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => {
                        let v = self.start + t * (self.stop - self.start);
                        (v, v)
                    }
                    Spacing::Log => {
                        let v = (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp();
                        (v, v)
                    }
                    Spacing::Db => {
                        let d = self.start + t * (self.stop - self.start);
                        (d, db_to_linear(d))
                    }
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct SweepRequest {
    pub statistic: Statistic,
    pub params: FtrParams,
    pub scenario: Option<OutageScenario>,
    pub axis: Axis,
    pub validate: bool,
    pub mc: McConfig,
    pub quad: QuadSpec,
    /// Order for `gmgf` and `igmgf`.
    pub order: u32,
    /// Transform variable for `imgf` and `igmgf`.
    pub s: f64,
    pub path: CdfPath,
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub table: Table,
    /// Every validated point agreed with simulation within 3σ (true when
    /// validation was not requested).
    pub all_agree: bool,
}

impl SweepRequest {
    fn check(&self) -> CliResult<()> {
        self.axis.validate()?;
        if !self.statistic.axes().contains(&self.axis.var) {
            return Err(usage(format!(
                "{} cannot be swept over {}",
                self.statistic.name(),
                self.axis.var.name()
            )));
        }
        let needs_integer = matches!(self.statistic, Statistic::Igmgf | Statistic::OutageA);
        if needs_integer && self.params.integer_m().is_err() {
            return Err(usage(format!(
                "{} requires an integer m, got {}",
                self.statistic.name(),
                self.params.m
            )));
        }
        if matches!(self.axis.var, AxisVar::S) && self.axis.stop > 0.0 {
            return Err(usage("transform variable s must stay <= 0"));
        }
        if matches!(self.statistic, Statistic::Imgf | Statistic::Igmgf) && self.s > 0.0 {
            return Err(usage("transform variable s must be <= 0"));
        }
        if matches!(self.axis.var, AxisVar::X | AxisVar::Z | AxisVar::Lambda) && self.axis.start < 0.0 {
            return Err(usage(format!("{} axis must be non-negative", self.axis.var.name())));
        }
        if self.axis.var == AxisVar::N {
            let ok = self.axis.spacing == Spacing::Linear
                && self.axis.values().iter().all(|&(v, _)| v >= 0.0 && v == v.round());
            if !ok {
                return Err(usage("moment orders must be non-negative integers on a linear axis"));
            }
        }
        match (self.statistic, &self.scenario) {
            (Statistic::OutageA, Some(OutageScenario::A(_))) => Ok(()),
            (Statistic::OutageB, Some(OutageScenario::B(_))) => Ok(()),
            (Statistic::OutageA | Statistic::OutageB, _) => {
                Err(usage("outage sweeps need a matching scenario"))
            }
            _ => Ok(()),
        }
    }
}

/// Scenario evaluated at one axis point.
fn scenario_at(sc: &OutageScenario, var: AxisVar, v: f64) -> OutageScenario {
    match *sc {
        OutageScenario::A(a) => {
            let mut a = a;
            match var {
                AxisVar::Sinr => {
                    let w = v * (a.l_interferers as f64 * a.p_i + a.n0);
                    a.channel = a.channel.with_gamma_bar(w);
                }
                _ => a.r_th = v,
            }
            OutageScenario::A(a)
        }
        OutageScenario::B(b) => {
            let mut b = b;
            match var {
                AxisVar::Sinr => {
                    let w = v * b.l_interferers as f64 * b.p_i;
                    b.channel = b.channel.with_gamma_bar(w);
                }
                _ => b.r_th_hat = v,
            }
            OutageScenario::B(b)
        }
    }
}

fn analytic(req: &SweepRequest, v: f64) -> CliResult<f64> {
    let p = &req.params;
    let q = &req.quad;
    Ok(match req.statistic {
        Statistic::Pdf => ftr_pdf(v, p, q)?,
        Statistic::Cdf => ftr_cdf(v, p, q, req.path)?,
        Statistic::Mgf => ftr_mgf(v, p)?,
        Statistic::Gmgf => ftr_gmgf(req.order, v, p)?,
        Statistic::Moments => ftr_moment(v as u32, p)?,
        Statistic::Imgf => ftr_imgf_lower(req.s, v, p, q, req.path)?,
        Statistic::Igmgf => ftr_igmgf(req.order, req.s, v, p, q)?,
        Statistic::OutageA | Statistic::OutageB => {
            let sc = req.scenario.as_ref().expect("checked");
            match scenario_at(sc, req.axis.var, v) {
                OutageScenario::A(a) => outage_a(&a, q)?,
                OutageScenario::B(b) => outage_b(&b)?,
            }
        }
    })
}

/// Mean of `f` over the samples and its standard error.
fn sample_mean(samples: &[f64], f: impl Fn(f64) -> f64) -> (f64, f64) {
    let n = samples.len() as f64;
    let (mut s, mut c, mut q) = (0.0f64, 0.0f64, 0.0f64);
    for &x in samples {
        let v = f(x);
        // Neumaier summation of the values.
        let t = s + v;
        c += if s.abs() >= v.abs() { (s - t) + v } else { (v - t) + s };
        s = t;
        q += v * v;
    }
    let mean = (s + c) / n;
    let var = if n > 1.0 { ((q - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    (mean, (var / n).sqrt())
}

/// Agreement within three standard deviations; a vanishing deviation
/// demands agreement to rounding.
pub fn within_3_sigma(analytic: f64, estimate: f64, sigma: f64) -> bool {
    let diff = (analytic - estimate).abs();
    if sigma > 0.0 {
        diff <= 3.0 * sigma
    } else {
        diff <= 1e-12 * analytic.abs().max(1.0)
    }
}

fn binomial_sigma(p: f64, n: u64) -> f64 {
    (p.clamp(0.0, 1.0) * (1.0 - p.clamp(0.0, 1.0)) / n as f64).sqrt()
}

/// Per-point bin half-widths for histogram validation of a density.
fn bin_half_widths(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 { xs[i] - xs[i - 1] } else { xs[1] - xs[0] };
            let right = if i + 1 < n { xs[i + 1] - xs[i] } else { left };
            0.25 * (left + right)
        })
        .collect()
}

/// Evaluates the request; rows follow axis order.
pub fn run_sweep(req: &SweepRequest) -> CliResult<SweepOutput> {
    req.check()?;
    let points = req.axis.values();
    let values: Vec<f64> = points
        .par_iter()
        .map(|&(_, v)| analytic(req, v))
        .collect::<CliResult<Vec<f64>>>()?;
    let mut header = vec![req.axis.column(), req.statistic.name().to_string()];
    if !req.validate {
        let rows = points.iter().zip(&values).map(|(&(d, _), &a)| vec![d, a]).collect();
        return Ok(SweepOutput {
            table: Table { header, rows },
            all_agree: true,
        });
    }

    // (reference, estimate, stderr, sigma used for the 3σ test)
    let checks: Vec<(f64, f64, f64, f64)> = match req.statistic {
        Statistic::OutageA | Statistic::OutageB => {
            let sc = req.scenario.as_ref().expect("checked");
            points
                .iter()
                .zip(&values)
                .map(|(&(_, v), &a)| {
                    let e = match scenario_at(sc, req.axis.var, v) {
                        OutageScenario::A(x) => mc_outage_a(&x, &req.mc)?,
                        OutageScenario::B(x) => mc_outage_b(&x, &req.mc)?,
                    };
                    Ok((a, e.mean, e.stderr, binomial_sigma(a, req.mc.samples)))
                })
                .collect::<CliResult<_>>()?
        }
        _ => {
            let samples = sample_snr(&req.params, &req.mc)?;
            let n = samples.len() as u64;
            match req.statistic {
                Statistic::Pdf => {
                    let xs: Vec<f64> = points.iter().map(|p| p.1).collect();
                    let half = bin_half_widths(&xs);
                    xs.par_iter()
                        .zip(&half)
                        .map(|(&x, &h)| {
                            let lo = (x - h).max(0.0);
                            let hi = x + h;
                            let w = hi - lo;
                            let prob = ftr_cdf(hi, &req.params, &req.quad, CdfPath::Quadrature)?
                                - ftr_cdf(lo, &req.params, &req.quad, CdfPath::Quadrature)?;
                            let hits = samples.iter().filter(|&&g| g > lo && g <= hi).count();
                            let phat = hits as f64 / n as f64;
                            Ok((
                                prob / w,
                                phat / w,
                                binomial_sigma(phat, n) / w,
                                binomial_sigma(prob, n) / w,
                            ))
                        })
                        .collect::<CliResult<_>>()?
                }
                Statistic::Cdf => points
                    .par_iter()
                    .zip(&values)
                    .map(|(&(_, x), &a)| {
                        let phat = samples.iter().filter(|&&g| g <= x).count() as f64 / n as f64;
                        Ok((a, phat, binomial_sigma(phat, n), binomial_sigma(a, n)))
                    })
                    .collect::<CliResult<_>>()?,
                _ => points
                    .par_iter()
                    .zip(&values)
                    .map(|(&(_, v), &a)| {
                        let (ord, s) = (req.order as i32, req.s);
                        let (mean, se) = match req.statistic {
                            Statistic::Mgf => sample_mean(&samples, |g| (v * g).exp()),
                            Statistic::Gmgf => sample_mean(&samples, |g| g.powi(ord) * (v * g).exp()),
                            Statistic::Moments => sample_mean(&samples, |g| g.powi(v as i32)),
                            Statistic::Imgf => {
                                sample_mean(&samples, |g| if g <= v { (s * g).exp() } else { 0.0 })
                            }
                            Statistic::Igmgf => sample_mean(&samples, |g| {
                                if g > v {
                                    g.powi(ord) * (s * g).exp()
                                } else {
                                    0.0
                                }
                            }),
                            _ => unreachable!("handled above"),
                        };
                        Ok((a, mean, se, se))
                    })
                    .collect::<CliResult<_>>()?,
            }
        }
    };

    let is_pdf = req.statistic == Statistic::Pdf;
    if is_pdf {
        header.push("bin_average".into());
    }
    header.extend(["mc".to_string(), "mc_stderr".to_string(), "agree".to_string()]);
    let mut all_agree = true;
    let rows = points
        .iter()
        .zip(&values)
        .zip(&checks)
        .map(|((&(d, _), &a), &(reference, est, se, sigma))| {
            let ok = within_3_sigma(reference, est, sigma);
            all_agree &= ok;
            let mut row = vec![d, a];
            if is_pdf {
                row.push(reference);
            }
            row.extend([est, se, if ok { 1.0 } else { 0.0 }]);
            row
        })
        .collect();
    Ok(SweepOutput {
        table: Table { header, rows },
        all_agree,
    })
}
