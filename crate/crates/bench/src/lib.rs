//! Degradation, benchmarking and command-line plumbing around the `gdeconv`
//! restoration pipeline.

pub mod bench;
pub mod config;
pub mod degrade;
pub mod error;
pub mod noise_estimate;
pub mod settings;

pub use crate::bench::{emit_lambda_trace, run_benchmark, run_single, BenchParams, BenchReport, PairSummary, RunResult};
pub use crate::config::RunConfig;
pub use crate::degrade::{degrade, degrade_with};
pub use crate::error::{BenchError, Result};
pub use crate::settings::{reference_isnr, KernelKind, Method, TestImage, TestSetting, TEST_SETTINGS};
