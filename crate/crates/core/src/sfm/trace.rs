//! Per-iteration solver records.

use std::time::Instant;

use serde::{Deserialize, Serialize};

/// One recorded iteration. `primal_best` and `dual_best` are best-so-far
/// values of `F(A)` and `s₋(V)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iter: usize,
    pub oracle_calls: u64,
    pub wall_ms: f64,
    pub primal_best: f64,
    pub dual_best: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveTrace {
    pub rows: Vec<TraceRow>,
}

pub const TRACE_HEADER: &str = "iter,oracle_calls,wall_ms,primal_best,dual_best,gap";

impl SolveTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(TRACE_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{:.3},{:.17e},{:.17e},{:.17e}\n",
                r.iter, r.oracle_calls, r.wall_ms, r.primal_best, r.dual_best, r.gap
            ));
        }
        out
    }

    /// Primal non-increasing, dual non-decreasing, gap consistent.
    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].primal_best <= w[0].primal_best && w[1].dual_best >= w[0].dual_best)
            && self.rows.iter().all(|r| (r.gap - (r.primal_best - r.dual_best)).abs() <= 1e-12 * (1.0 + r.gap.abs()))
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    /// First row whose gap is at most `eps`.
    pub fn first_below(&self, eps: f64) -> Option<&TraceRow> {
        self.rows.iter().find(|r| r.gap <= eps)
    }
}

pub(crate) struct Clock {
    start: Instant,
    enabled: bool,
}

impl Clock {
    pub(crate) fn new(enabled: bool) -> Self {
        Clock { start: Instant::now(), enabled }
    }

    pub(crate) fn ms(&self) -> f64 {
        if self.enabled {
            self.start.elapsed().as_secs_f64() * 1e3
        } else {
            0.0
        }
    }
}
