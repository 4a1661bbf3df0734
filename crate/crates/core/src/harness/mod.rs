//! Experiment orchestration: configuration, sweeps, rate fits and reports.

pub mod config;
pub mod fit;
pub mod report;
pub mod run;

pub use config::{default_h, ExperimentConfig, ExperimentKind, OutputPaths};
pub use fit::{fit_rate, Fit, RateReport, Verdict, MIN_R2};
pub use report::{emit, Check, Format, Report, CSV_HEADER};
pub use run::{run, thread_pool, THREADS_VAR};
