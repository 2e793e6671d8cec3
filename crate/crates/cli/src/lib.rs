//! Command-line front end for the FTR fading library: statistic sweeps,
//! preset figures and a self-test.

pub mod args;
pub mod config;
pub mod error;
pub mod figures;
pub mod selftest;
pub mod svg;
pub mod sweep;
pub mod table;

use std::io::Write;

use args::{quad_spec, Cli, Command};
use error::{usage, CliResult};
use figures::{figure, FigureOptions};
use selftest::{selftest, Level};
use sweep::{run_sweep, Statistic};

/// Executes a parsed command, writing its report to `out`. Returns the
/// process exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<i32> {
    let (statistic, args) = match cli.command {
        Command::Pdf(a) => (Statistic::Pdf, a),
        Command::Cdf(a) => (Statistic::Cdf, a),
        Command::Mgf(a) => (Statistic::Mgf, a),
        Command::Gmgf(a) => (Statistic::Gmgf, a),
        Command::Moments(a) => (Statistic::Moments, a),
        Command::Imgf(a) => (Statistic::Imgf, a),
        Command::Igmgf(a) => (Statistic::Igmgf, a),
        Command::OutageA(a) => (Statistic::OutageA, a),
        Command::OutageB(a) => (Statistic::OutageB, a),
        Command::Figure(f) => {
            let opts = FigureOptions {
                seed: f.seed,
                samples: f.samples,
                quad: quad_spec(f.tol)?,
            };
            if opts.samples == 0 {
                return Err(usage("--samples must be positive"));
            }
            let (data, csv, svg) = figure(&f.name, &f.out, &opts)?;
            writeln!(out, "wrote {}", csv.display())?;
            writeln!(out, "wrote {}", svg.display())?;
            if !data.all_agree {
                writeln!(out, "note: some simulated points fall outside 3 sigma of the analytic curve")?;
            }
            return Ok(0);
        }
        Command::Selftest(s) => {
            let level = Level::parse(&s.level).ok_or_else(|| usage(format!("unknown level {}", s.level)))?;
            let report = selftest(level, s.seed, s.inject_fault)?;
            write!(out, "{}", report.render())?;
            return Ok(if report.passed() { 0 } else { 1 });
        }
    };
    let req = args.resolve(statistic)?;
    let result = run_sweep(&req)?;
    let csv = result.table.to_csv();
    match &args.out {
        Some(path) => std::fs::write(path, csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(if result.all_agree { 0 } else { 1 })
}
