//! Error-decay sweep: SIR against greedy UKQ, written as `report.csv` and
//! `decay.svg`.
//!
//! Runs a reduced sweep (3 seeds) into a temporary directory. Pass a directory
//! as the first argument to keep the files.

use kqforge::bench::{emit, sweep, ExperimentSpec, Method};

pub fn run_example() -> kqforge::Result<kqforge::bench::RunReport> {
    let spec = ExperimentSpec {
        seeds: 3,
        methods: vec![Method::Sir, Method::Ukq],
        ..ExperimentSpec::default()
    };
    let report = sweep(&spec)?;
    for f in &report.fits {
        println!("{:>4} {:<13} slope {:+.3} (r² {:.3})", f.method, f.metric, f.fit.slope, f.fit.r2);
    }
    let dir = match std::env::args().nth(1) {
        Some(d) => std::path::PathBuf::from(d),
        None => std::env::temp_dir().join("kqforge-decay-sweep"),
    };
    for path in emit(&report, &dir)? {
        println!("wrote {}", path.display());
    }
    Ok(report)
}

#[allow(dead_code)]
fn main() -> kqforge::Result<()> {
    run_example().map(|_| ())
}
