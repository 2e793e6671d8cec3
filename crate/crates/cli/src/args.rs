//! Command-line arguments and their resolution against a config file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use ftr_core::{CdfPath, FtrParams, McConfig, OutageScenario, QuadSpec, ScenarioA, ScenarioB};

use crate::config::Config;
use crate::error::{usage, CliResult};
use crate::sweep::{db_to_linear, Axis, AxisVar, Spacing, Statistic, SweepRequest};

#[derive(Debug, Parser)]
#[command(name = "ftr", version, about = "Fluctuating Two-Ray fading statistics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// SNR probability density.
    Pdf(SweepArgs),
    /// SNR cumulative distribution.
    Cdf(SweepArgs),
    /// Moment generating function E[exp(s γ)].
    Mgf(SweepArgs),
    /// Generalized MGF E[γ^n exp(s γ)].
    Gmgf(SweepArgs),
    /// Moments E[γ^n] over a range of orders.
    Moments(SweepArgs),
    /// Lower incomplete MGF over its upper limit.
    Imgf(SweepArgs),
    /// Incomplete generalized MGF over its lower limit (integer m).
    Igmgf(SweepArgs),
    /// Outage with interferers and noise (integer m).
    OutageA(SweepArgs),
    /// Outage of an interference-limited MRC receiver.
    OutageB(SweepArgs),
    /// Reproduce a preset figure as CSV and SVG.
    Figure(FigureArgs),
    /// Run the built-in validation suite.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args, Default)]
pub struct SweepArgs {
    /// key=value file supplying any of the long flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "gamma-bar")]
    pub gamma_bar: Option<f64>,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<u64>,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Add Monte Carlo columns; exit status 1 unless every point agrees within 3σ.
    #[arg(long)]
    pub validate: bool,
    /// Relative quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Swept variable: x, s, n, z, lambda, sinr or r-th.
    #[arg(long)]
    pub axis: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub stop: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// linear, log or db.
    #[arg(long)]
    pub spacing: Option<String>,
    /// Order of gmgf and igmgf.
    #[arg(long)]
    pub n: Option<u32>,
    /// Transform variable of imgf and igmgf.
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// CDF evaluation path: quadrature or phi2.
    #[arg(long)]
    pub path: Option<String>,
    /// Number of interferers.
    #[arg(long = "L")]
    pub l: Option<u32>,
    /// Mean power of each interferer.
    #[arg(long = "p-i")]
    pub p_i: Option<f64>,
    /// Background noise power.
    #[arg(long)]
    pub n0: Option<f64>,
    /// Linear outage threshold.
    #[arg(long = "r-th")]
    pub r_th: Option<f64>,
    /// Receive antennas (scenario B).
    #[arg(long = "n-antennas")]
    pub n_antennas: Option<u32>,
    /// Outage threshold in dB.
    #[arg(long = "r-th-db", allow_negative_numbers = true)]
    pub r_th_db: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// fig1, fig2, fig3, fig4 or fig5.
    pub name: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Monte Carlo samples per point.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// fast or full.
    #[arg(long, default_value = "fast")]
    pub level: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Corrupt a frozen fixture; the run must then fail.
    #[arg(long)]
    pub inject_fault: bool,
}

/// Flag value, else config value, else `default`.
fn pick<T: std::str::FromStr>(flag: Option<T>, cfg: &Config, key: &str, default: T) -> CliResult<T> {
    Ok(match flag {
        Some(v) => v,
        None => cfg.get(key)?.unwrap_or(default),
    })
}

fn pick_opt<T: std::str::FromStr>(flag: Option<T>, cfg: &Config, key: &str) -> CliResult<Option<T>> {
    Ok(match flag {
        Some(v) => Some(v),
        None => cfg.get(key)?,
    })
}

pub fn quad_spec(tol: Option<f64>) -> CliResult<QuadSpec> {
    let spec = match tol {
        Some(t) => QuadSpec::default().with_rel_tol(t),
        None => QuadSpec::default(),
    };
    spec.validate()?;
    Ok(spec)
}

fn default_axis(stat: Statistic) -> (f64, f64, usize) {
    match stat {
        Statistic::Pdf | Statistic::Cdf | Statistic::Imgf | Statistic::Igmgf => (0.0, 5.0, 101),
        Statistic::Mgf | Statistic::Gmgf => (-10.0, 0.0, 51),
        Statistic::Moments => (0.0, 5.0, 6),
        Statistic::OutageA => (0.0, 30.0, 16),
        Statistic::OutageB => (-10.0, 10.0, 11),
    }
}

impl SweepArgs {
    /// Merges flags with the optional config file into a sweep request.
    pub fn resolve(&self, statistic: Statistic) -> CliResult<SweepRequest> {
        let cfg = match &self.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        let c = &cfg;
        let params = FtrParams::new(
            pick(self.gamma_bar, c, "gamma-bar", 1.0)?,
            pick(self.m, c, "m", 2.0)?,
            pick(self.k, c, "k", 10.0)?,
            pick(self.delta, c, "delta", 0.5)?,
        )
        .map_err(|e| usage(e.to_string()))?;

        let var = match pick_opt(self.axis.clone(), c, "axis")? {
            Some(name) => AxisVar::parse(&name).ok_or_else(|| usage(format!("unknown axis {name}")))?,
            None => statistic.axes()[0],
        };
        let spacing = match pick_opt(self.spacing.clone(), c, "spacing")? {
            Some(name) => Spacing::parse(&name).ok_or_else(|| usage(format!("unknown spacing {name}")))?,
            None if matches!(var, AxisVar::Sinr | AxisVar::Threshold) => Spacing::Db,
            None => Spacing::Linear,
        };
        let (start, stop, points) = default_axis(statistic);
        let axis = Axis {
            var,
            start: pick(self.start, c, "start", start)?,
            stop: pick(self.stop, c, "stop", stop)?,
            points: pick(self.points, c, "points", points)?,
            spacing,
        };

        let path = match pick_opt(self.path.clone(), c, "path")?.as_deref() {
            None | Some("quadrature") => CdfPath::Quadrature,
            Some("phi2") => CdfPath::Phi2,
            Some(other) => return Err(usage(format!("unknown cdf path {other}"))),
        };

        let scenario = match statistic {
            Statistic::OutageA | Statistic::OutageB => Some(self.scenario(statistic, params, c)?),
            _ => None,
        };
        let samples = pick(self.samples, c, "samples", 100_000)?;
        if samples == 0 {
            return Err(usage("--samples must be positive"));
        }
        Ok(SweepRequest {
            statistic,
            params,
            scenario,
            axis,
            validate: self.validate || c.get::<bool>("validate")?.unwrap_or(false),
            mc: McConfig::new(samples, pick(self.seed, c, "seed", 42)?),
            quad: quad_spec(pick_opt(self.tol, c, "tol")?)?,
            order: pick(self.n, c, "n", 1)?,
            s: pick(self.s, c, "s", -1.0)?,
            path,
        })
    }

    fn scenario(&self, statistic: Statistic, params: FtrParams, c: &Config) -> CliResult<OutageScenario> {
        let lin = pick_opt(self.r_th, c, "r-th")?;
        let db = pick_opt(self.r_th_db, c, "r-th-db")?;
        let r_th = match (lin, db) {
            (Some(_), Some(_)) => return Err(usage("give either --r-th or --r-th-db, not both")),
            (Some(v), None) => v,
            (None, Some(d)) => db_to_linear(d),
            (None, None) => 1.0,
        };
        let l = pick(self.l, c, "L", 1)?;
        let p_i = pick(self.p_i, c, "p-i", 1.0)?;
        let sc = match statistic {
            Statistic::OutageA => {
                let n0 = pick(self.n0, c, "n0", 1.0)?;
                ScenarioA::new(params, l, p_i, n0, r_th).map(OutageScenario::A)
            }
            _ => {
                let n = pick(self.n_antennas, c, "n-antennas", 1)?;
                ScenarioB::new(params, n, l, p_i, r_th).map(OutageScenario::B)
            }
        };
        sc.map_err(|e| usage(e.to_string()))
    }
}
