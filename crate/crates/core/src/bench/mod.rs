//! Error-decay experiment: datasets, per-method runs, sweeps over `p`, rate
//! fits and report files.

mod config;
mod emit;
mod rates;
mod sweep;

pub use config::{ExperimentSpec, GkqGridSettings, Method, SirSettings, UkqSettings, WeightSetting};
pub use emit::{emit, read_report_csv, render_svg, report_csv, REPORT_HEADER};
pub use rates::{median, median_curves, rate_fit, RateFit};
pub use sweep::{gen_dataset, run_single, sweep, FitRow, RunOutput, RunReport, Row};
