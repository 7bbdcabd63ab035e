//! Benchmark driver for `subq`: seeded instance suites, solver comparisons
//! and machine-readable traces.

pub mod output;
pub mod prox;
pub mod sfm;
pub mod suites;

pub use prox::{run_prox_bench, ProxReport};
pub use sfm::{run_sfm_bench, BenchConfig, SfmReport, Solver};
pub use suites::{instance, Instance, Suite};
