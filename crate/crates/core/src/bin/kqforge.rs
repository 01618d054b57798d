//! Command-line front end for the decay experiment.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use kqforge::bench::{self, ExperimentSpec, Method};

#[derive(Parser)]
#[command(name = "kqforge", version, about = "Kernel quadrature for parameter distributions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample `y = sin(2πx) + noise` on [-1, 1] and write `x,y` CSV.
    GenData {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        noise_sd: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// One method at one `p`, over all seeds of the config.
    Run {
        #[arg(long)]
        method: Method,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Full sweep over methods, `p` and seeds.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Medians and log–log slopes of an existing report.
    Rates {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        fit_min_p: usize,
    },
}

fn load(config: Option<&PathBuf>) -> Result<ExperimentSpec> {
    match config {
        Some(path) => Ok(ExperimentSpec::from_toml_file(path)?),
        None => Ok(ExperimentSpec::default()),
    }
}

fn write_report(report: &bench::RunReport, out: &PathBuf) -> Result<()> {
    for path in bench::emit(report, out)? {
        println!("wrote {}", path.display());
    }
    let failed = report.rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        eprintln!("{failed} run(s) failed; their metric fields are empty");
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::GenData { n, noise_sd, seed, out } => {
            let data = bench::gen_dataset(n, noise_sd, seed)?;
            data.write_csv(&out)?;
            println!("wrote {} rows to {}", data.len(), out.display());
        }
        Command::Run { method, p, config, out } => {
            let mut spec = load(config.as_ref())?;
            spec.methods = vec![method];
            spec.p_grid = vec![p];
            spec.fit_min_p = spec.fit_min_p.min(p);
            let report = bench::sweep(&spec).context("run failed")?;
            write_report(&report, &out)?;
        }
        Command::Sweep { config, out } => {
            let spec = load(config.as_ref())?;
            let report = bench::sweep(&spec).context("sweep failed")?;
            write_report(&report, &out)?;
            for f in &report.fits {
                println!("{} {} slope {:.3} (r2 {:.3})", f.method, f.metric, f.fit.slope, f.fit.r2);
            }
        }
        Command::Rates { input, fit_min_p } => {
            let report = bench::read_report_csv(&input, fit_min_p)?;
            for metric in ["max_err_test", "rmse_test"] {
                let curves = bench::median_curves(&report.rows, |r| match metric {
                    "max_err_test" => r.max_err_test,
                    _ => r.rmse_test,
                });
                for (method, curve) in curves {
                    let cells: Vec<String> = curve.iter().map(|(p, v)| format!("p={p}:{v:.4}")).collect();
                    println!("{method} {metric} {}", cells.join(" "));
                }
            }
            for f in &report.fits {
                println!("{} {} slope {:.3} intercept {:.3} r2 {:.3}", f.method, f.metric, f.fit.slope, f.fit.intercept, f.fit.r2);
            }
        }
    }
    Ok(())
}
