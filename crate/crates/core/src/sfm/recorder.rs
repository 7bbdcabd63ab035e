//! Best-so-far bookkeeping shared by the iterative solvers.

use crate::lovasz::BaseVector;
use crate::oracle::Oracle;
use crate::set::Subset;

use super::restrict::Reduction;
use super::trace::{Clock, SolveTrace, TraceRow};
use super::{Budget, SfmResult};

pub(crate) struct Recorder<'a> {
    red: &'a Reduction,
    root: &'a Oracle,
    calls0: u64,
    clock: Clock,
    budget: &'a Budget,
    pub(crate) best_primal: f64,
    best_set: Subset,
    pub(crate) best_dual: f64,
    best_base: Option<BaseVector>,
    trace: SolveTrace,
}

impl<'a> Recorder<'a> {
    pub(crate) fn new(red: &'a Reduction, root: &'a Oracle, calls0: u64, clock: Clock, budget: &'a Budget) -> Self {
        let q = red.free.len();
        let mut rec = Recorder {
            red,
            root,
            calls0,
            clock,
            budget,
            best_primal: 0.0,
            best_set: Subset::empty(q),
            best_dual: f64::NEG_INFINITY,
            best_base: None,
            trace: SolveTrace::default(),
        };
        if q == 0 {
            rec.best_dual = 0.0;
            rec.best_base = Some(BaseVector { s: vec![], support: vec![(crate::set::Ordering::identity(0), 1.0)] });
        }
        rec
    }

    pub(crate) fn calls(&self) -> u64 {
        self.root.calls() - self.calls0
    }

    pub(crate) fn exhausted(&self, iter: usize) -> bool {
        iter >= self.budget.max_iters || self.budget.max_oracle_calls.is_some_and(|m| self.calls() >= m)
    }

    /// Reduced-space gap.
    pub(crate) fn gap(&self) -> f64 {
        self.best_primal - self.best_dual
    }

    /// Offers every prefix of `order` with its chain values as a candidate.
    pub(crate) fn prefixes(&mut self, order: &[usize], chain: &[f64]) {
        let q = order.len();
        let best = chain.iter().copied().enumerate().fold(None, |acc: Option<(usize, f64)>, (i, v)| match acc {
            Some((_, b)) if b <= v => acc,
            _ => Some((i, v)),
        });
        if let Some((i, v)) = best {
            if v < self.best_primal || (v == self.best_primal && i + 1 < self.best_set.len()) {
                self.best_primal = v;
                self.best_set = Subset::from_indices(q, order[..=i].iter().copied());
            }
        }
    }

    /// Offers a base vector of the reduced function; `base` builds the
    /// certificate only when it improves.
    pub(crate) fn dual(&mut self, s: &[f64], base: impl FnOnce() -> BaseVector) {
        let d = crate::lovasz::negative_part(s);
        if d > self.best_dual {
            self.best_dual = d;
            self.best_base = Some(base());
        }
    }

    pub(crate) fn row(&mut self, iter: usize) {
        let primal = self.red.lift_primal(self.best_primal);
        let dual = self.red.lift_dual(self.best_dual);
        let row = TraceRow {
            iter,
            oracle_calls: self.calls(),
            wall_ms: self.clock.ms(),
            primal_best: primal,
            dual_best: dual,
            gap: primal - dual,
        };
        self.trace.rows.push(row);
    }

    pub(crate) fn finish(self, algorithm: &str, iterations: usize, converged: bool) -> SfmResult {
        let minimizer = self.red.lift_set(&self.best_set);
        let min_value = self.root.eval(&minimizer);
        let dual = self.best_base.as_ref().map(|b| self.red.lift_base(b));
        let dual_value = dual.as_ref().map_or(f64::NEG_INFINITY, |b| b.negative_part());
        SfmResult {
            minimizer,
            min_value,
            gap: min_value - dual_value,
            dual,
            trace: self.trace,
            algorithm: algorithm.to_string(),
            iterations,
            converged,
            minimal_minimizer: None,
            maximal_minimizer: None,
            smooth_objective: Vec::new(),
        }
    }
}
