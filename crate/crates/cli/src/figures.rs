//! Preset figures: CSV data plus an SVG rendering.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use ftr_core::ftr::{ftr_pdf, ftr_pdf_integer};
use ftr_core::mc::{histogram_density, sample_snr};
use ftr_core::{CdfPath, FtrParams, McConfig, OutageScenario, QuadSpec, ScenarioA, ScenarioB};

use crate::error::{usage, CliResult};
use crate::svg::{Plot, Series, Style};
use crate::sweep::{run_sweep, Axis, AxisVar, Spacing, Statistic, SweepRequest};
use crate::table::Table;

pub const FIGURES: [&str; 5] = ["fig1", "fig4", "fig5", "fig2", "fig3"];

/// Mean power of the desired signal relative to one interferer in the MRC
/// figures.
pub const MRC_POWER_RATIO: f64 = 10.0;

/// Settings shared by every preset.
#[derive(Debug, Clone, Copy)]
pub struct FigureOptions {
    pub seed: u64,
    /// Monte Carlo samples per curve point (per curve for fig1).
    pub samples: u64,
    pub quad: QuadSpec,
}

impl Default for FigureOptions {
    fn default() -> Self {
        FigureOptions {
            seed: 42,
            samples: 100_000,
            quad: QuadSpec::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FigureData {
    pub table: Table,
    pub plot: Plot,
    /// Every Monte Carlo point agreed with its analytic value within 3σ.
    pub all_agree: bool,
}

/// One analytic curve with its simulated companion.
struct Curve {
    label: String,
    statistic: Statistic,
    params: FtrParams,
    scenario: OutageScenario,
}

fn params(m: f64, k: f64, delta: f64) -> FtrParams {
    FtrParams::new(1.0, m, k, delta).expect("preset parameters are valid")
}

fn scenario_a(m: f64, k: f64, delta: f64, r_th: f64) -> Curve {
    let p = params(m, k, delta);
    Curve {
        label: format!("m{m}_k{k}_d{delta}_r{r_th}"),
        statistic: Statistic::OutageA,
        params: p,
        scenario: OutageScenario::A(ScenarioA::new(p, 2, 0.01, 1.0, r_th).expect("valid preset")),
    }
}

fn scenario_b(m: f64, n: u32, l: u32) -> Curve {
    let p = params(m, 10.0, 0.6).with_gamma_bar(MRC_POWER_RATIO);
    Curve {
        label: format!("m{m}_n{n}_l{l}"),
        statistic: Statistic::OutageB,
        params: p,
        scenario: OutageScenario::B(ScenarioB::new(p, n, l, 1.0, 1.0).expect("valid preset")),
    }
}

fn outage_figure(title: &str, x_label: &str, axis: Axis, curves: Vec<Curve>, opts: &FigureOptions) -> CliResult<FigureData> {
    let mut header = vec![axis.column()];
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut series = Vec::new();
    let mut all_agree = true;
    let xs: Vec<f64> = axis.values().iter().map(|p| p.0).collect();
    for (i, c) in curves.into_iter().enumerate() {
        let req = SweepRequest {
            statistic: c.statistic,
            params: c.params,
            scenario: Some(c.scenario),
            axis,
            validate: true,
            mc: McConfig::new(opts.samples, opts.seed.wrapping_add(i as u64)),
            quad: opts.quad,
            order: 0,
            s: 0.0,
            path: CdfPath::Quadrature,
        };
        let out = run_sweep(&req)?;
        all_agree &= out.all_agree;
        let analytic = out.table.column("outage").expect("outage column");
        let mc = out.table.column("mc").expect("mc column");
        let se = out.table.column("mc_stderr").expect("stderr column");
        series.push(Series {
            label: c.label.clone(),
            points: xs.iter().copied().zip(analytic.iter().copied()).collect(),
            style: Style::Line,
            color: i,
        });
        series.push(Series {
            label: format!("{} (sim)", c.label),
            points: xs.iter().copied().zip(mc.iter().copied()).collect(),
            style: Style::Markers,
            color: i,
        });
        header.extend([c.label.clone(), format!("{}_mc", c.label), format!("{}_mc_stderr", c.label)]);
        columns.extend([analytic, mc, se]);
    }
    let rows = (0..xs.len())
        .map(|r| std::iter::once(xs[r]).chain(columns.iter().map(|c| c[r])).collect())
        .collect();
    Ok(FigureData {
        table: Table { header, rows },
        plot: Plot {
            title: title.into(),
            x_label: x_label.into(),
            y_label: "outage probability".into(),
            log_y: true,
            series,
        },
        all_agree,
    })
}

fn db_axis(var: AxisVar, start: f64, stop: f64, points: usize) -> Axis {
    Axis {
        var,
        start,
        stop,
        points,
        spacing: Spacing::Db,
    }
}

/// SNR densities for m = 1.5 and m = 3 from both mixture formulations,
/// with histogram estimates on the same grid.
fn fig1(opts: &FigureOptions) -> CliResult<FigureData> {
    const BINS: usize = 80;
    const X_MAX: f64 = 4.0;
    let width = X_MAX / BINS as f64;
    let edges: Vec<f64> = (0..=BINS).map(|i| i as f64 * width).collect();
    let xs: Vec<f64> = (0..BINS).map(|i| (i as f64 + 0.5) * width).collect();
    let p15 = FtrParams::new(1.0, 1.5, 10.0, 0.5)?;
    let p3 = FtrParams::new(1.0, 3.0, 10.0, 0.5)?;
    let eval = |f: &(dyn Fn(f64) -> ftr_core::Result<f64> + Sync)| -> CliResult<Vec<f64>> {
        Ok(xs.par_iter().map(|&x| f(x)).collect::<ftr_core::Result<Vec<f64>>>()?)
    };
    let rs15 = eval(&|x| ftr_pdf(x, &p15, &opts.quad))?;
    let rs3 = eval(&|x| ftr_pdf(x, &p3, &opts.quad))?;
    let nak3 = eval(&|x| ftr_pdf_integer(x, &p3, &opts.quad))?;
    let h15 = histogram_density(&sample_snr(&p15, &McConfig::new(opts.samples, opts.seed))?, &edges)?;
    let h3 = histogram_density(&sample_snr(&p3, &McConfig::new(opts.samples, opts.seed.wrapping_add(1)))?, &edges)?;

    let header = ["x", "pdf_rs_m1.5", "pdf_rs_m3", "pdf_nakagami_m3", "hist_m1.5", "hist_m3"]
        .map(String::from)
        .to_vec();
    let cols = [&rs15, &rs3, &nak3, &h15, &h3];
    let rows = (0..BINS)
        .map(|r| std::iter::once(xs[r]).chain(cols.iter().map(|c| c[r])).collect())
        .collect();
    let line = |label: &str, ys: &[f64], style, color| Series {
        label: label.into(),
        points: xs.iter().copied().zip(ys.iter().copied()).collect(),
        style,
        color,
    };
    let series = vec![
        line("m=1.5, RS mixture", &rs15, Style::Line, 0),
        line("m=1.5, simulation", &h15, Style::Markers, 0),
        line("m=3, RS mixture", &rs3, Style::Line, 1),
        line("m=3, Nakagami mixture", &nak3, Style::Dashed, 2),
        line("m=3, simulation", &h3, Style::Markers, 1),
    ];
    Ok(FigureData {
        table: Table { header, rows },
        plot: Plot {
            title: "FTR SNR density (mean 1, K=10, delta=0.5)".into(),
            x_label: "SNR".into(),
            y_label: "density".into(),
            log_y: false,
            series,
        },
        all_agree: true,
    })
}

/// Builds the table and plot of a preset without touching the filesystem.
pub fn figure_data(name: &str, opts: &FigureOptions) -> CliResult<FigureData> {
    let sinr = db_axis(AxisVar::Sinr, 0.0, 35.0, 15);
    let threshold = db_axis(AxisVar::Threshold, -10.0, 10.0, 11);
    match name {
        "fig1" => fig1(opts),
        "fig4" => outage_figure(
            "Outage with interference and noise (L=2, P_I=0.01, R_th=1)",
            "normalized SINR (dB)",
            sinr,
            vec![
                scenario_a(1.0, 10.0, 0.6, 1.0),
                scenario_a(2.0, 10.0, 0.6, 1.0),
                scenario_a(3.0, 10.0, 0.6, 1.0),
                scenario_a(2.0, 15.0, 0.6, 1.0),
                scenario_a(2.0, 10.0, 0.2, 1.0),
            ],
            opts,
        ),
        "fig5" => outage_figure(
            "Outage versus SINR threshold (m=2, K=10, delta=0.6)",
            "normalized SINR (dB)",
            sinr,
            [6.0, 8.0, 10.0].map(|r| scenario_a(2.0, 10.0, 0.6, r)).into(),
            opts,
        ),
        "fig2" => outage_figure(
            "MRC outage for N=2, L=1 (K=10, delta=0.6)",
            "SIR threshold (dB)",
            threshold,
            [0.5, 1.0, 1.5, 2.5].map(|m| scenario_b(m, 2, 1)).into(),
            opts,
        ),
        "fig3" => outage_figure(
            "MRC outage for m=2.5 (K=10, delta=0.6)",
            "SIR threshold (dB)",
            threshold,
            [(1, 1), (2, 1), (4, 1), (1, 2), (2, 2), (4, 2)]
                .map(|(n, l)| scenario_b(2.5, n, l))
                .into(),
            opts,
        ),
        other => Err(usage(format!("unknown figure {other}; expected one of {}", FIGURES.join(", ")))),
    }
}

/// Writes `<name>.csv` and `<name>.svg` into `out_dir` and returns both paths.
pub fn figure(name: &str, out_dir: &Path, opts: &FigureOptions) -> CliResult<(FigureData, PathBuf, PathBuf)> {
    let data = figure_data(name, opts)?;
    std::fs::create_dir_all(out_dir)?;
    let csv = out_dir.join(format!("{name}.csv"));
    let svg = out_dir.join(format!("{name}.svg"));
    std::fs::write(&csv, data.table.to_csv())?;
    std::fs::write(&svg, data.plot.render())?;
    Ok((data, csv, svg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> FigureOptions {
        FigureOptions {
            samples: 20_000,
            ..FigureOptions::default()
        }
    }

    #[test]
    fn fig2_has_all_curves_and_m1_point() {
        let d = figure_data("fig2", &quick()).unwrap();
        assert_eq!(d.table.rows.len(), 11);
        assert_eq!(d.table.header.len(), 1 + 4 * 3);
        let x = d.table.column("r_th_db").unwrap();
        let i = x.iter().position(|&v| v == 0.0).unwrap();
        let m1 = d.table.column("m1_n2_l1").unwrap()[i];
        assert!((m1 - 0.01).abs() < 0.0015, "{m1}");
    }

    #[test]
    fn fig1_formulations_agree() {
        let d = figure_data("fig1", &quick()).unwrap();
        let rs = d.table.column("pdf_rs_m3").unwrap();
        let nak = d.table.column("pdf_nakagami_m3").unwrap();
        for (a, b) in rs.iter().zip(&nak) {
            assert!((a - b).abs() <= 1e-9 * a.abs().max(1e-300), "{a} {b}");
        }
    }

    #[test]
    fn unknown_figure_is_usage_error() {
        assert!(matches!(figure_data("fig9", &quick()), Err(crate::error::CliError::Usage(_))));
    }
}
