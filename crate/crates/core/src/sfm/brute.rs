//! Exhaustive reference solver.

use crate::error::Result;
use crate::oracle::Oracle;
use crate::polyhedra::exhaustive_min_minus_modular;

use super::trace::{SolveTrace, TraceRow};
use super::SfmResult;

pub const BRUTE_FORCE_SFM_MAX: usize = 22;

/// Exact minimum by enumeration; the lexicographically smallest (smallest
/// bitmask) minimizer is returned.
pub fn brute_force(f: &Oracle) -> Result<SfmResult> {
    let calls0 = f.calls();
    let start = std::time::Instant::now();
    let m = exhaustive_min_minus_modular(f, &vec![0.0; f.len()])?;
    let row = TraceRow {
        iter: 0,
        oracle_calls: f.calls() - calls0,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        primal_best: m.value,
        dual_best: m.value,
        gap: 0.0,
    };
    Ok(SfmResult {
        min_value: f.eval(&m.first),
        minimizer: m.first,
        dual: None,
        gap: 0.0,
        trace: SolveTrace { rows: vec![row] },
        algorithm: "brute_force".into(),
        iterations: 0,
        converged: true,
        minimal_minimizer: None,
        maximal_minimizer: Some(m.maximal),
        smooth_objective: Vec::new(),
    })
}
